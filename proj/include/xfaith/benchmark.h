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

#ifndef XFAITH_BENCHMARK_H_
#define XFAITH_BENCHMARK_H_

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xfaith/error.h"

namespace xfaith {

enum class Judgement { kNo = 0, kPartial = 1, kYes = 2 };
enum class GoldLabel { kNotEntail, kEntail };

Judgement ParseJudgement(std::string_view name);
std::string_view JudgementName(Judgement j);

// no -> 0, partial -> 1, yes -> 2, summed over the three annotators:
// 0..2 is not_entail, 3..6 is entail.
GoldLabel AggregateJudgements(std::span<const Judgement> judgements);

// Probability that a random entail item outscores a random not_entail item,
// ties counting one half. Computed from midranks in O(n log n).
// Throws UndefinedMetricError when either class is absent.
double RocAuc(std::span<const double> scores,
              std::span<const GoldLabel> labels);

// Fleiss's kappa. counts[i][c] is the number of raters who put item i in
// category c; every row must sum to the same n >= 2.
double FleissKappa(const std::vector<std::vector<int>>& counts);

// Kappa over yes/no where partial counts as yes.
double FleissKappaYesNo(const std::vector<std::array<Judgement, 3>>& items);

// Fraction of positions where prediction equals gold. Throws
// ValidationError on empty or mismatched inputs.
template <typename T>
double Accuracy(std::span<const T> predictions, std::span<const T> gold) {
  if (predictions.size() != gold.size()) {
    throw ValidationError("accuracy: " + std::to_string(predictions.size()) +
                          " predictions for " + std::to_string(gold.size()) +
                          " gold labels");
  }
  if (gold.empty()) throw ValidationError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] == gold[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

struct BenchmarkRecord {
  std::string id;
  std::size_t sentence = 0;
  std::string lang_pair = "all";
  std::array<Judgement, 3> judgements{};
  GoldLabel gold = GoldLabel::kNotEntail;
  std::map<std::string, double> scores;  // strategy -> faithfulness score
};

// Benchmark JSONL: {"id", "sent_idx", "judgements": [3], "scores": {...}},
// plus an optional "lang_pair" (defaults to "all").
std::vector<BenchmarkRecord> ParseBenchmark(std::istream& in);

struct BenchmarkCell {
  std::optional<double> auc;  // nullopt renders as n/a
  std::size_t n = 0;          // records carrying this strategy's score
};

struct BenchmarkTable {
  std::vector<std::string> lang_pairs;  // sorted
  std::vector<std::string> strategies;  // sorted
  // (strategy, lang pair) -> cell
  std::map<std::pair<std::string, std::string>, BenchmarkCell> cells;
  std::map<std::string, std::size_t> n_by_pair;
  std::map<std::string, double> not_entail_by_pair;  // fraction
  std::map<std::string, std::optional<double>> kappa_by_pair;
  std::size_t total = 0;

  // Strategies as rows, language pairs then AVG as columns, followed by n,
  // % not-entail and kappa rows and a "# n=<total>" footer.
  std::string ToTsv() const;
};

BenchmarkTable BenchmarkStrategies(const std::vector<BenchmarkRecord>& records);

}  // namespace xfaith

#endif  // XFAITH_BENCHMARK_H_
