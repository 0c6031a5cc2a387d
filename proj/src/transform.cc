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

#include "xfaith/transform.h"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "xfaith/error.h"

namespace xfaith {
namespace {

using nlohmann::json;

bool IsTag(std::string_view token) {
  return token == kOpenTag || token == kCloseTag;
}

void CheckArity(const TokenizedSummary& summary,
                std::span<const Faithful> labels) {
  if (labels.size() != summary.spans.size()) {
    throw ValidationError(std::to_string(labels.size()) +
                          " sentence labels for " +
                          std::to_string(summary.spans.size()) + " sentences");
  }
}

}  // namespace

TokenizedSummary TokenizedSummary::FromSentences(
    const std::vector<Sentence>& sentences, const Tokenizer& tokenizer) {
  TokenizedSummary out;
  for (const Sentence& s : sentences) {
    const std::size_t start = out.tokens.size();
    for (std::string& t : tokenizer.Tokenize(s.text)) {
      out.tokens.push_back(std::move(t));
    }
    out.spans.emplace_back(start, out.tokens.size());
  }
  out.Validate();
  return out;
}

void TokenizedSummary::Validate() const {
  std::size_t expected = 0;
  for (std::size_t j = 0; j < spans.size(); ++j) {
    if (spans[j].first != expected || spans[j].second < spans[j].first) {
      throw ValidationError("sentence span " + std::to_string(j) +
                            " does not continue the previous one");
    }
    expected = spans[j].second;
  }
  if (expected != tokens.size()) {
    throw ValidationError("sentence spans cover " + std::to_string(expected) +
                          " of " + std::to_string(tokens.size()) + " tokens");
  }
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (IsTag(tokens[t])) {
      throw ValidationError("token " + std::to_string(t) +
                            " is a reserved tag");
    }
  }
}

std::vector<int> PropagateLabels(const TokenizedSummary& summary,
                                 std::span<const Faithful> sentence_labels) {
  CheckArity(summary, sentence_labels);
  std::vector<int> out(summary.tokens.size(), 1);
  for (std::size_t j = 0; j < summary.spans.size(); ++j) {
    const int flag = sentence_labels[j] == Faithful::kYes ? 1 : 0;
    for (std::size_t t = summary.spans[j].first; t < summary.spans[j].second;
         ++t) {
      out[t] = flag;
    }
  }
  return out;
}

Corpus MakeClean(const Corpus& corpus, const RemovalSet& removal) {
  std::unordered_set<std::string> drop(removal.ids.begin(), removal.ids.end());
  std::unordered_set<std::string> known;
  for (const CorpusExample& ex : corpus) known.insert(ex.id);
  for (const std::string& id : removal.ids) {
    if (!known.contains(id)) {
      throw ValidationError("removal set names unknown id \"" + id + "\"");
    }
  }
  Corpus out;
  out.reserve(corpus.size() - drop.size());
  for (const CorpusExample& ex : corpus) {
    if (!drop.contains(ex.id)) out.push_back(ex);
  }
  return out;
}

MaskRecord MakeMask(std::string id, const TokenizedSummary& summary,
                    std::span<const Faithful> sentence_labels) {
  return {std::move(id), summary.tokens,
          PropagateLabels(summary, sentence_labels)};
}

UnlikeRecord MakeUnlike(std::string id, const TokenizedSummary& summary,
                        std::span<const Faithful> sentence_labels) {
  UnlikeRecord out;
  out.id = std::move(id);
  out.segment = PropagateLabels(summary, sentence_labels);
  for (std::size_t t = 0; t < out.segment.size(); ++t) {
    if (out.segment[t] == 0) out.unlikely_idx.push_back(t);
  }
  bool open = false;
  for (std::size_t j = 0; j < summary.spans.size(); ++j) {
    const bool no = sentence_labels[j] == Faithful::kNo;
    if (no && !open) {
      out.tokens_with_tags.emplace_back(kOpenTag);
      open = true;
    } else if (!no && open) {
      out.tokens_with_tags.emplace_back(kCloseTag);
      open = false;
    }
    for (std::size_t t = summary.spans[j].first; t < summary.spans[j].second;
         ++t) {
      out.tokens_with_tags.push_back(summary.tokens[t]);
    }
  }
  if (open) out.tokens_with_tags.emplace_back(kCloseTag);
  return out;
}

TokenSeq StripTags(const TokenSeq& tokens_with_tags) {
  TokenSeq out;
  out.reserve(tokens_with_tags.size());
  bool open = false;
  for (std::size_t i = 0; i < tokens_with_tags.size(); ++i) {
    const std::string& t = tokens_with_tags[i];
    if (t == kOpenTag) {
      if (open) {
        throw ValidationError("nested <h> at position " + std::to_string(i));
      }
      open = true;
    } else if (t == kCloseTag) {
      if (!open) {
        throw ValidationError("unmatched </h> at position " +
                              std::to_string(i));
      }
      open = false;
    } else {
      out.push_back(t);
    }
  }
  if (open) throw ValidationError("unclosed <h>");
  return out;
}

std::vector<double> MaskTagProbs(std::span<const double> dist,
                                 std::span<const std::size_t> tag_ids) {
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw ValidationError("negative or NaN probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ValidationError("distribution sums to " + std::to_string(total));
  }
  std::vector<bool> is_tag(dist.size(), false);
  for (std::size_t id : tag_ids) {
    if (id >= dist.size()) {
      throw ValidationError("tag id " + std::to_string(id) +
                            " is outside the vocabulary");
    }
    is_tag[id] = true;
  }
  double kept = 0.0;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (!is_tag[v]) kept += dist[v];
  }
  if (kept <= 0.0) {
    throw DegenerateDistributionError("tag tokens carry all probability mass");
  }
  std::vector<double> out(dist.size(), 0.0);
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (!is_tag[v]) out[v] = dist[v] / kept;
  }
  return out;
}

std::string SerializeMask(const MaskRecord& r) {
  json record = json::object();
  record["id"] = r.id;
  record["tokens"] = r.tokens;
  record["faithful"] = r.faithful;
  return record.dump();
}

std::string SerializeUnlike(const UnlikeRecord& r) {
  json record = json::object();
  record["id"] = r.id;
  record["tokens_with_tags"] = r.tokens_with_tags;
  record["segment"] = r.segment;
  record["unlikely_idx"] = r.unlikely_idx;
  return record.dump();
}

}  // namespace xfaith
