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

#ifndef XFAITH_TRANSFORM_H_
#define XFAITH_TRANSFORM_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xfaith/annotate.h"
#include "xfaith/corpus.h"
#include "xfaith/textmetrics.h"

namespace xfaith {

inline constexpr std::string_view kOpenTag = "<h>";
inline constexpr std::string_view kCloseTag = "</h>";

struct TokenizedSummary {
  TokenSeq tokens;
  // Half-open [start, end) token ranges, one per sentence, tiling tokens.
  std::vector<std::pair<std::size_t, std::size_t>> spans;

  static TokenizedSummary FromSentences(const std::vector<Sentence>& sentences,
                                        const Tokenizer& tokenizer);

  // Throws ValidationError unless spans tile tokens in order and no token is
  // a reserved tag.
  void Validate() const;
};

// Per-token flags, 1 for tokens in "yes" sentences and 0 for "no".
std::vector<int> PropagateLabels(const TokenizedSummary& summary,
                                 std::span<const Faithful> sentence_labels);

// Drops the listed ids, keeping order. Throws ValidationError for ids that
// are not in the corpus.
Corpus MakeClean(const Corpus& corpus, const RemovalSet& removal);

struct MaskRecord {
  std::string id;
  TokenSeq tokens;
  std::vector<int> faithful;
};

MaskRecord MakeMask(std::string id, const TokenizedSummary& summary,
                    std::span<const Faithful> sentence_labels);

struct UnlikeRecord {
  std::string id;
  TokenSeq tokens_with_tags;
  std::vector<int> segment;  // per original token: 1 = yes (p1), 0 = no (p0)
  std::vector<std::size_t> unlikely_idx;  // 0-based original positions
};

// Wraps every maximal run of consecutive "no" sentences in one <h> ... </h>
// pair.
UnlikeRecord MakeUnlike(std::string id, const TokenizedSummary& summary,
                        std::span<const Faithful> sentence_labels);

// Removes tag tokens. Throws ValidationError on unbalanced or nested tags.
TokenSeq StripTags(const TokenSeq& tokens_with_tags);

// Zeroes the tag entries of a vocabulary distribution and renormalises the
// rest. Throws DegenerateDistributionError if the tags hold all the mass.
std::vector<double> MaskTagProbs(std::span<const double> dist,
                                 std::span<const std::size_t> tag_ids);

std::string SerializeMask(const MaskRecord& r);
std::string SerializeUnlike(const UnlikeRecord& r);

}  // namespace xfaith

#endif  // XFAITH_TRANSFORM_H_
