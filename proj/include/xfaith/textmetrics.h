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

#ifndef XFAITH_TEXTMETRICS_H_
#define XFAITH_TEXTMETRICS_H_

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "xfaith/corpus.h"

namespace xfaith {

using TokenSeq = std::vector<std::string>;

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual TokenSeq Tokenize(std::string_view text) const = 0;
  virtual std::string Name() const = 0;
};

// Lowercases, splits on whitespace, and emits each CJK character as its own
// token.
class DefaultTokenizer : public Tokenizer {
 public:
  TokenSeq Tokenize(std::string_view text) const override;
  std::string Name() const override { return "default"; }
};

// Splits on whitespace only; no case folding.
class WhitespaceTokenizer : public Tokenizer {
 public:
  TokenSeq Tokenize(std::string_view text) const override;
  std::string Name() const override { return "whitespace"; }
};

// "default" or "whitespace".
std::unique_ptr<Tokenizer> MakeTokenizer(std::string_view name);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

std::size_t LcsLength(const TokenSeq& a, const TokenSeq& b);

// LCS based. Throws ValidationError if either side is empty.
RougeScore RougeL(const TokenSeq& candidate, const TokenSeq& reference);

// Clipped bigram overlap. Empty input throws; a side with fewer than two
// tokens scores 0.
RougeScore Rouge2(const TokenSeq& candidate, const TokenSeq& reference);

struct Fragment {
  std::size_t summary_start;
  std::size_t doc_start;
  std::size_t length;

  bool operator==(const Fragment&) const = default;
};

using FragmentSet = std::vector<Fragment>;

// Greedy left-to-right: at each summary position take the longest match in
// the document (earliest document start on ties); unmatched tokens are
// skipped as novel.
FragmentSet ExtractiveFragments(const TokenSeq& doc, const TokenSeq& summary);

double Coverage(const FragmentSet& fragments, const TokenSeq& summary);
double Density(const FragmentSet& fragments, const TokenSeq& summary);
double Compression(const TokenSeq& doc, const TokenSeq& summary);

// Fraction of summary n-grams that never occur in the document. Throws
// ValidationError when the summary is shorter than n.
double NovelNgrams(const TokenSeq& doc, const TokenSeq& summary, std::size_t n);

TokenSeq Lead(const TokenSeq& doc, std::size_t n_tokens);

// Greedily adds the document sentence with the largest ROUGE-2 F1 gain for
// the selection (concatenated in document order) until nothing improves or
// max_sents are chosen. Returns indices in selection order.
std::vector<std::size_t> ExtOracle(const std::vector<TokenSeq>& doc_sents,
                                   const TokenSeq& reference,
                                   std::size_t max_sents);

// Concatenates the chosen sentences in document order.
TokenSeq JoinSelection(const std::vector<TokenSeq>& doc_sents,
                       std::vector<std::size_t> selection);

// Extractiveness statistics per language pair, as TSV: one row per
// statistic, one column per language pair.
std::string CorpusStatsTsv(const Corpus& corpus, const Tokenizer& tokenizer);

}  // namespace xfaith

#endif  // XFAITH_TEXTMETRICS_H_
