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

#include "xfaith/corpus.h"

#include <unordered_set>

#include "json.hpp"
#include "xfaith/error.h"
#include "xfaith/io.h"
#include "xfaith/unicode.h"

namespace xfaith {
namespace {

using nlohmann::json;

const json& RequireField(const json& record, const char* field,
                         std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw ParseError(std::string("missing field \"") + field + "\"", line);
  }
  return *it;
}

std::string RequireString(const json& record, const char* field,
                          std::size_t line) {
  const json& value = RequireField(record, field, line);
  if (!value.is_string()) {
    throw ParseError(std::string("field \"") + field + "\" must be a string",
                     line);
  }
  return value.get<std::string>();
}

std::vector<std::string> StringArray(const json& value, const char* field,
                                     std::size_t line) {
  if (!value.is_array()) {
    throw ParseError(std::string("field \"") + field + "\" must be an array",
                     line);
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_string()) {
      throw ParseError(
          std::string("field \"") + field + "\" must contain only strings",
          line);
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<Sentence> SentencesField(const std::vector<std::string>& texts,
                                     const char* field, std::size_t line) {
  try {
    return MakeSentences(texts);
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line) + ": " + field +
                          ": " + e.what());
  }
}

json SentenceArray(const std::vector<Sentence>& sents) {
  json out = json::array();
  for (const Sentence& s : sents) out.push_back(s.text);
  return out;
}

void CheckLanguage(const std::string& code, const CorpusOptions& options,
                   const char* field, std::size_t line) {
  if (code.empty()) {
    throw ValidationError("line " + std::to_string(line) + ": " + field +
                          " is empty");
  }
  if (!options.languages.empty() && !options.languages.contains(code)) {
    throw ValidationError("line " + std::to_string(line) + ": " + field +
                          " \"" + code + "\" is not a configured language");
  }
}

bool IsAsciiTerminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

bool IsCjkTerminator(char32_t c) {
  return c == U'。' || c == U'！' || c == U'？';
}

}  // namespace

std::string CorpusExample::DocumentText() const {
  std::string out;
  for (const Sentence& s : doc_sents) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

std::vector<Sentence> MakeSentences(const std::vector<std::string>& texts) {
  std::vector<Sentence> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string text = Trim(NormalizeNfc(texts[i]));
    if (text.empty()) {
      throw ValidationError("sentence " + std::to_string(i) +
                            " is empty after trimming");
    }
    out.push_back({std::move(text), i});
  }
  return out;
}

Corpus ParseCorpus(std::istream& in, const CorpusOptions& options) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  const std::vector<std::string> lines = ReadLines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    if (Trim(lines[i]).empty()) continue;
    json record;
    try {
      record = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line);

    CorpusExample ex;
    ex.id = RequireString(record, "id", line);
    ex.src_lang = RequireString(record, "src_lang", line);
    ex.tgt_lang = RequireString(record, "tgt_lang", line);
    const auto doc = StringArray(RequireField(record, "doc_sents", line),
                                 "doc_sents", line);
    const auto sum = StringArray(RequireField(record, "sum_sents", line),
                                 "sum_sents", line);
    if (ex.id.empty()) throw ValidationError("line " + std::to_string(line) +
                                             ": id is empty");
    CheckLanguage(ex.src_lang, options, "src_lang", line);
    CheckLanguage(ex.tgt_lang, options, "tgt_lang", line);
    if (doc.empty()) {
      throw ValidationError("line " + std::to_string(line) +
                            ": doc_sents is empty");
    }
    if (sum.empty()) {
      throw ValidationError("line " + std::to_string(line) +
                            ": sum_sents is empty");
    }
    ex.doc_sents = SentencesField(doc, "doc_sents", line);
    ex.sum_sents = SentencesField(sum, "sum_sents", line);
    if (auto it = record.find("doc_tgt_sents");
        it != record.end() && !it->is_null()) {
      ex.doc_tgt_sents = SentencesField(
          StringArray(*it, "doc_tgt_sents", line), "doc_tgt_sents", line);
    }
    if (auto it = record.find("ref_sum_src");
        it != record.end() && !it->is_null()) {
      ex.ref_sum_src = SentencesField(StringArray(*it, "ref_sum_src", line),
                                      "ref_sum_src", line);
    }
    if (!seen.insert(ex.id).second) {
      throw ValidationError("line " + std::to_string(line) +
                            ": duplicate id \"" + ex.id + "\"");
    }
    corpus.push_back(std::move(ex));
  }
  return corpus;
}

std::string SerializeExample(const CorpusExample& example) {
  json record = json::object();
  record["id"] = example.id;
  record["src_lang"] = example.src_lang;
  record["tgt_lang"] = example.tgt_lang;
  record["doc_sents"] = SentenceArray(example.doc_sents);
  record["sum_sents"] = SentenceArray(example.sum_sents);
  if (example.doc_tgt_sents) {
    record["doc_tgt_sents"] = SentenceArray(*example.doc_tgt_sents);
  }
  if (example.ref_sum_src) {
    record["ref_sum_src"] = SentenceArray(*example.ref_sum_src);
  }
  return record.dump();
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const CorpusExample& ex : corpus) {
    out += SerializeExample(ex);
    out.push_back('\n');
  }
  return out;
}

std::vector<Sentence> SplitSentences(std::string_view text,
                                     std::string_view /*lang*/) {
  // The terminator set is the same for every language we ingest; lang is
  // kept so language-specific rules can be added without an API change.
  const std::vector<CodePoint> cps = DecodeUtf8(text);
  std::vector<Sentence> out;
  std::size_t start = 0;  // byte offset of the current sentence
  auto emit = [&](std::size_t end) {
    std::string s = Trim(text.substr(start, end - start));
    if (!s.empty()) out.push_back({std::move(s), out.size()});
    start = end;
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i].value;
    if (IsAsciiTerminator(c) || IsCjkTerminator(c)) {
      bool cjk = IsCjkTerminator(c);
      std::size_t j = i + 1;
      while (j < cps.size() &&
             (IsAsciiTerminator(cps[j].value) || IsCjkTerminator(cps[j].value))) {
        cjk = cjk || IsCjkTerminator(cps[j].value);
        ++j;
      }
      const bool at_end = j == cps.size();
      if (cjk || at_end || IsWhitespace(cps[j].value)) {
        emit(at_end ? text.size() : cps[j].begin);
      }
      i = j;
      continue;
    }
    ++i;
  }
  emit(text.size());
  return out;
}

std::string_view NliLabelName(NliLabel label) {
  switch (label) {
    case NliLabel::kEntailment:
      return "entailment";
    case NliLabel::kNeutral:
      return "neutral";
    case NliLabel::kContradiction:
      return "contradiction";
  }
  return "?";
}

NliLabel ParseNliLabel(std::string_view name) {
  if (name == "entailment") return NliLabel::kEntailment;
  if (name == "neutral") return NliLabel::kNeutral;
  if (name == "contradiction") return NliLabel::kContradiction;
  throw ValidationError("unknown NLI label \"" + std::string(name) + "\"");
}

std::vector<XnliAlignedRow> ParseXnliRows(std::istream& in) {
  std::vector<XnliAlignedRow> rows;
  const std::vector<std::string> lines = ReadLines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    if (Trim(lines[i]).empty()) continue;
    json record;
    try {
      record = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line);
    XnliAlignedRow row;
    try {
      row.gold_label = ParseNliLabel(RequireString(record, "gold_label", line));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
    for (const char* field : {"premise", "hypothesis"}) {
      const json& by_lang = RequireField(record, field, line);
      if (!by_lang.is_object()) {
        throw ParseError(std::string("field \"") + field +
                             "\" must map language codes to strings",
                         line);
      }
      auto& target = std::string_view(field) == "premise" ? row.premise
                                                          : row.hypothesis;
      for (const auto& [lang, text] : by_lang.items()) {
        if (!text.is_string()) {
          throw ParseError(std::string("field \"") + field + "." + lang +
                               "\" must be a string",
                           line);
        }
        target[lang] = NormalizeNfc(text.get<std::string>());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NliPair> DeriveCrossPairs(const std::vector<XnliAlignedRow>& rows,
                                      std::string_view premise_lang,
                                      std::string_view hypothesis_lang) {
  std::vector<NliPair> pairs;
  pairs.reserve(rows.size());
  const std::string plang(premise_lang);
  const std::string hlang(hypothesis_lang);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto p = rows[i].premise.find(plang);
    auto h = rows[i].hypothesis.find(hlang);
    if (p == rows[i].premise.end()) {
      throw ValidationError("row " + std::to_string(i) +
                            ": no premise in language \"" + plang + "\"");
    }
    if (h == rows[i].hypothesis.end()) {
      throw ValidationError("row " + std::to_string(i) +
                            ": no hypothesis in language \"" + hlang + "\"");
    }
    pairs.push_back({p->second, h->second, rows[i].gold_label});
  }
  return pairs;
}

}  // namespace xfaith
