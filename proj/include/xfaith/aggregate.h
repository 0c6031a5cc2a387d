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

#ifndef XFAITH_AGGREGATE_H_
#define XFAITH_AGGREGATE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xfaith/corpus.h"
#include "xfaith/scorer.h"

namespace xfaith {

enum class Strategy { kFullDoc, kSummacZs, kSentli, kInfuse, kOneToOne };

std::string_view StrategyName(Strategy s);
Strategy ParseStrategy(std::string_view name);

// M x N grid: row m is document sentence P_m (premise), column n is summary
// sentence H_n (hypothesis).
class EntailmentMatrix {
 public:
  EntailmentMatrix(std::size_t rows, std::size_t cols,
                   std::vector<NliDistribution> cells);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const NliDistribution& at(std::size_t m, std::size_t n) const {
    return cells_[m * cols_ + n];
  }
  NliDistribution& at(std::size_t m, std::size_t n) {
    return cells_[m * cols_ + n];
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<NliDistribution> cells_;
};

struct SentenceFaithfulness {
  std::size_t sentence = 0;  // summary sentence index n
  double score = 0.0;        // entailment probability of the chosen premise
  Strategy strategy = Strategy::kOneToOne;
  std::vector<std::size_t> premises;  // document order, distinct
};

struct PairFaithfulness {
  std::string id;
  std::vector<double> sentence_scores;
  double aggregate = 0.0;  // arithmetic mean of sentence_scores
};

// Scores all M x N (document sentence, summary sentence) pairs in one batch.
EntailmentMatrix BuildMatrix(const CorpusExample& example, Scorer& scorer);

// Column-wise max of entailment, then the mean over summary sentences.
PairFaithfulness ScoreOneToOne(const EntailmentMatrix& matrix,
                               std::string id = {});

// Same values as ScoreOneToOne, plus the argmax premise (lowest index on
// ties).
std::vector<SentenceFaithfulness> ScoreSummacZs(const EntailmentMatrix& matrix);

// The whole document, joined with single spaces, as one premise.
std::vector<SentenceFaithfulness> ScoreFullDoc(const CorpusExample& example,
                                               Scorer& scorer);

// Union of the top-k sentences by entailment and the top-k by contradiction,
// in document order, as one premise.
std::vector<SentenceFaithfulness> ScoreSentli(const CorpusExample& example,
                                              const EntailmentMatrix& matrix,
                                              Scorer& scorer, int k = 5);
std::vector<SentenceFaithfulness> ScoreSentli(const CorpusExample& example,
                                              Scorer& scorer, int k = 5);

// When InFusE stops growing the premise once it is past the floor.
enum class NeutralStop {
  // Keep growing only while neutral strictly decreases (by more than eps).
  kUnlessDecreasing,
  // Keep growing only while neutral strictly increases (by more than eps).
  kUnlessIncreasing,
};

std::string_view NeutralStopName(NeutralStop s);
NeutralStop ParseNeutralStop(std::string_view name);

struct InfuseOptions {
  int min_premise = 5;
  double eps = 0.0;
  NeutralStop stop = NeutralStop::kUnlessDecreasing;
};

// Grows the premise one entailment-ranked sentence at a time. The first
// min(min_premise, M) steps are unconditional; after that growth stops at
// the first step that fails the neutral test and the previous premise's
// entailment is the score.
std::vector<SentenceFaithfulness> ScoreInfuse(const CorpusExample& example,
                                              const EntailmentMatrix& matrix,
                                              Scorer& scorer,
                                              const InfuseOptions& options = {});
std::vector<SentenceFaithfulness> ScoreInfuse(const CorpusExample& example,
                                              Scorer& scorer,
                                              const InfuseOptions& options = {});

// Throws ValidationError on empty input.
PairFaithfulness PairScore(std::span<const double> sentence_scores,
                           std::string id = {});
PairFaithfulness PairScore(std::span<const SentenceFaithfulness> sentences,
                           std::string id = {});

struct StrategyOptions {
  Strategy strategy = Strategy::kInfuse;
  int k = 5;
  InfuseOptions infuse;
};

struct ScoredExample {
  std::string id;
  Strategy strategy;
  std::vector<SentenceFaithfulness> sentences;
  double aggregate = 0.0;
};

ScoredExample ScoreExample(const CorpusExample& example, Scorer& scorer,
                           const StrategyOptions& options);

// {"id", "strategy", "sent_scores", "premises", "aggregate"} on one line.
std::string SerializeScores(const ScoredExample& scored);
ScoredExample ParseScores(std::string_view line);

}  // namespace xfaith

#endif  // XFAITH_AGGREGATE_H_
