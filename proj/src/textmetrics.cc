// Copyright 2026 The xfaith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xfaith/textmetrics.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "xfaith/error.h"
#include "xfaith/unicode.h"

namespace xfaith {
namespace {

TokenSeq SplitTokens(std::string_view text, bool split_cjk) {
  TokenSeq out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (const CodePoint& cp : DecodeUtf8(text)) {
    if (IsWhitespace(cp.value)) {
      flush();
    } else if (split_cjk && IsCjk(cp.value)) {
      flush();
      out.emplace_back(text.substr(cp.begin, cp.end - cp.begin));
    } else {
      current.append(text.substr(cp.begin, cp.end - cp.begin));
    }
  }
  flush();
  return out;
}

RougeScore FromCounts(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0 ? overlap / cand_total : 0.0;
  s.recall = ref_total > 0 ? overlap / ref_total : 0.0;
  s.f1 = s.precision + s.recall > 0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

std::map<std::pair<std::string, std::string>, int> Bigrams(const TokenSeq& t) {
  std::map<std::pair<std::string, std::string>, int> out;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) ++out[{t[i], t[i + 1]}];
  return out;
}

std::string Fixed(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << v;
  return out.str();
}

}  // namespace

TokenSeq DefaultTokenizer::Tokenize(std::string_view text) const {
  return SplitTokens(ToLower(text), /*split_cjk=*/true);
}

TokenSeq WhitespaceTokenizer::Tokenize(std::string_view text) const {
  return SplitTokens(text, /*split_cjk=*/false);
}

std::unique_ptr<Tokenizer> MakeTokenizer(std::string_view name) {
  if (name == "default") return std::make_unique<DefaultTokenizer>();
  if (name == "whitespace") return std::make_unique<WhitespaceTokenizer>();
  throw ValidationError("unknown tokenizer \"" + std::string(name) +
                        "\" (expected default|whitespace)");
}

std::size_t LcsLength(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore RougeL(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty() || reference.empty()) {
    throw ValidationError("ROUGE-L needs non-empty candidate and reference");
  }
  return FromCounts(static_cast<double>(LcsLength(candidate, reference)),
                    static_cast<double>(candidate.size()),
                    static_cast<double>(reference.size()));
}

RougeScore Rouge2(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty() || reference.empty()) {
    throw ValidationError("ROUGE-2 needs non-empty candidate and reference");
  }
  if (candidate.size() < 2 || reference.size() < 2) return {};
  const auto cand = Bigrams(candidate);
  const auto ref = Bigrams(reference);
  int overlap = 0;
  for (const auto& [bigram, count] : cand) {
    if (auto it = ref.find(bigram); it != ref.end()) {
      overlap += std::min(count, it->second);
    }
  }
  return FromCounts(overlap, static_cast<double>(candidate.size() - 1),
                    static_cast<double>(reference.size() - 1));
}

FragmentSet ExtractiveFragments(const TokenSeq& doc, const TokenSeq& summary) {
  FragmentSet out;
  std::size_t i = 0;
  while (i < summary.size()) {
    std::size_t best_len = 0;
    std::size_t best_start = 0;
    for (std::size_t j = 0; j < doc.size(); ++j) {
      std::size_t k = 0;
      while (i + k < summary.size() && j + k < doc.size() &&
             summary[i + k] == doc[j + k]) {
        ++k;
      }
      if (k > best_len) {
        best_len = k;
        best_start = j;
      }
    }
    if (best_len > 0) {
      out.push_back({i, best_start, best_len});
      i += best_len;
    } else {
      ++i;
    }
  }
  return out;
}

double Coverage(const FragmentSet& fragments, const TokenSeq& summary) {
  if (summary.empty()) throw ValidationError("coverage of an empty summary");
  std::size_t total = 0;
  for (const Fragment& f : fragments) total += f.length;
  return static_cast<double>(total) / static_cast<double>(summary.size());
}

double Density(const FragmentSet& fragments, const TokenSeq& summary) {
  if (summary.empty()) throw ValidationError("density of an empty summary");
  std::size_t total = 0;
  for (const Fragment& f : fragments) total += f.length * f.length;
  return static_cast<double>(total) / static_cast<double>(summary.size());
}

double Compression(const TokenSeq& doc, const TokenSeq& summary) {
  if (summary.empty()) throw ValidationError("compression of an empty summary");
  return static_cast<double>(doc.size()) / static_cast<double>(summary.size());
}

double NovelNgrams(const TokenSeq& doc, const TokenSeq& summary,
                   std::size_t n) {
  if (n == 0) throw ValidationError("n-gram order must be >= 1");
  if (summary.size() < n) {
    throw ValidationError("summary has fewer than " + std::to_string(n) +
                          " tokens");
  }
  std::set<TokenSeq> doc_grams;
  for (std::size_t i = 0; i + n <= doc.size(); ++i) {
    doc_grams.emplace(doc.begin() + i, doc.begin() + i + n);
  }
  std::size_t novel = 0;
  const std::size_t total = summary.size() - n + 1;
  for (std::size_t i = 0; i < total; ++i) {
    if (!doc_grams.contains(TokenSeq(summary.begin() + i,
                                     summary.begin() + i + n))) {
      ++novel;
    }
  }
  return static_cast<double>(novel) / static_cast<double>(total);
}

TokenSeq Lead(const TokenSeq& doc, std::size_t n_tokens) {
  if (n_tokens == 0) throw ValidationError("LEAD needs n_tokens >= 1");
  return TokenSeq(doc.begin(),
                  doc.begin() + static_cast<std::ptrdiff_t>(
                                    std::min(n_tokens, doc.size())));
}

TokenSeq JoinSelection(const std::vector<TokenSeq>& doc_sents,
                       std::vector<std::size_t> selection) {
  std::sort(selection.begin(), selection.end());
  TokenSeq out;
  for (std::size_t i : selection) {
    out.insert(out.end(), doc_sents[i].begin(), doc_sents[i].end());
  }
  return out;
}

std::vector<std::size_t> ExtOracle(const std::vector<TokenSeq>& doc_sents,
                                   const TokenSeq& reference,
                                   std::size_t max_sents) {
  if (doc_sents.empty()) throw ValidationError("EXT-ORACLE needs a document");
  if (reference.empty()) throw ValidationError("EXT-ORACLE needs a reference");
  std::vector<std::size_t> selected;
  std::vector<bool> used(doc_sents.size(), false);
  double current = 0.0;
  while (selected.size() < max_sents) {
    double best = current;
    std::size_t best_index = doc_sents.size();
    for (std::size_t s = 0; s < doc_sents.size(); ++s) {
      if (used[s]) continue;
      std::vector<std::size_t> trial = selected;
      trial.push_back(s);
      const TokenSeq joined = JoinSelection(doc_sents, trial);
      if (joined.empty()) continue;
      const double f1 = Rouge2(joined, reference).f1;
      if (f1 > best) {
        best = f1;
        best_index = s;
      }
    }
    if (best_index == doc_sents.size()) break;
    used[best_index] = true;
    selected.push_back(best_index);
    current = best;
  }
  return selected;
}

std::string CorpusStatsTsv(const Corpus& corpus, const Tokenizer& tokenizer) {
  struct Acc {
    double examples = 0, doc_words = 0, doc_sents = 0, sum_words = 0,
           sum_sents = 0, coverage = 0, density = 0, compression = 0;
    double novel[4] = {0, 0, 0, 0};
    double novel_n[4] = {0, 0, 0, 0};
    double lead = 0, oracle = 0;
  };
  std::map<std::string, Acc> by_pair;
  for (const CorpusExample& ex : corpus) {
    Acc& acc = by_pair[ex.LanguagePair()];
    std::vector<TokenSeq> doc_sents;
    TokenSeq doc;
    for (const Sentence& s : ex.doc_sents) {
      doc_sents.push_back(tokenizer.Tokenize(s.text));
      doc.insert(doc.end(), doc_sents.back().begin(), doc_sents.back().end());
    }
    TokenSeq summary;
    for (const Sentence& s : ex.sum_sents) {
      const TokenSeq t = tokenizer.Tokenize(s.text);
      summary.insert(summary.end(), t.begin(), t.end());
    }
    if (doc.empty() || summary.empty()) {
      throw ValidationError("example " + ex.id + " tokenizes to nothing");
    }
    acc.examples += 1;
    acc.doc_words += static_cast<double>(doc.size());
    acc.doc_sents += static_cast<double>(ex.doc_sents.size());
    acc.sum_words += static_cast<double>(summary.size());
    acc.sum_sents += static_cast<double>(ex.sum_sents.size());
    const FragmentSet fragments = ExtractiveFragments(doc, summary);
    acc.coverage += Coverage(fragments, summary);
    acc.density += Density(fragments, summary);
    acc.compression += Compression(doc, summary);
    for (std::size_t n = 1; n <= 4; ++n) {
      if (summary.size() < n) continue;
      acc.novel[n - 1] += NovelNgrams(doc, summary, n);
      acc.novel_n[n - 1] += 1;
    }
    acc.lead += RougeL(Lead(doc, summary.size()), summary).f1;
    const TokenSeq oracle = JoinSelection(
        doc_sents, ExtOracle(doc_sents, summary, ex.sum_sents.size()));
    acc.oracle += oracle.empty() ? 0.0 : RougeL(oracle, summary).f1;
  }

  std::ostringstream out;
  out << "Statistic";
  for (const auto& [pair, _] : by_pair) out << '\t' << pair;
  out << '\n';
  auto row = [&](const char* name, auto value) {
    out << name;
    for (const auto& [pair, acc] : by_pair) out << '\t' << value(acc);
    out << '\n';
  };
  row("Examples", [](const Acc& a) { return std::to_string(
                                         static_cast<long long>(a.examples)); });
  row("Words/Doc", [](const Acc& a) { return Fixed(a.doc_words / a.examples); });
  row("Sents/Doc", [](const Acc& a) { return Fixed(a.doc_sents / a.examples); });
  row("Words/Sum", [](const Acc& a) { return Fixed(a.sum_words / a.examples); });
  row("Sents/Sum", [](const Acc& a) { return Fixed(a.sum_sents / a.examples); });
  row("Coverage",
      [](const Acc& a) { return Fixed(100.0 * a.coverage / a.examples); });
  row("Density", [](const Acc& a) { return Fixed(a.density / a.examples); });
  row("Compression",
      [](const Acc& a) { return Fixed(a.compression / a.examples); });
  const char* novel_names[4] = {"% novel unigrams", "% novel bigrams",
                                "% novel trigrams", "% novel 4-grams"};
  for (int n = 0; n < 4; ++n) {
    row(novel_names[n], [n](const Acc& a) {
      return a.novel_n[n] > 0 ? Fixed(100.0 * a.novel[n] / a.novel_n[n])
                              : std::string("n/a");
    });
  }
  row("LEAD", [](const Acc& a) { return Fixed(100.0 * a.lead / a.examples); });
  row("EXT-ORACLE",
      [](const Acc& a) { return Fixed(100.0 * a.oracle / a.examples); });
  return out.str();
}

}  // namespace xfaith
