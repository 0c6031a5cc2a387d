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

#include "xfaith/aggregate.h"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "xfaith/error.h"

namespace xfaith {
namespace {

using nlohmann::json;

std::string JoinPremise(const CorpusExample& example,
                        const std::vector<std::size_t>& indices) {
  std::string out;
  for (std::size_t m : indices) {
    if (!out.empty()) out.push_back(' ');
    out += example.doc_sents[m].text;
  }
  return out;
}

void CheckShape(const CorpusExample& example, const EntailmentMatrix& matrix) {
  if (matrix.rows() != example.doc_sents.size() ||
      matrix.cols() != example.sum_sents.size()) {
    throw ValidationError("matrix shape does not match example " + example.id);
  }
}

// Document indices ordered by descending key; equal keys keep document order.
template <typename Key>
std::vector<std::size_t> RankRows(std::size_t rows, Key key) {
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  return order;
}

// Scores one premise per summary sentence in a single batch.
std::vector<NliDistribution> ScorePremises(
    const CorpusExample& example, Scorer& scorer,
    const std::vector<std::size_t>& sentences,
    const std::vector<std::vector<std::size_t>>& premises,
    std::string_view what) {
  std::vector<ScorePair> pairs;
  pairs.reserve(sentences.size());
  for (std::size_t j = 0; j < sentences.size(); ++j) {
    pairs.push_back({JoinPremise(example, premises[j]),
                     example.sum_sents[sentences[j]].text});
  }
  try {
    return scorer.Score(pairs, [&](std::size_t j) {
      return std::string(what) + " premise for summary sentence " +
             std::to_string(sentences[j]);
    });
  } catch (const Error& e) {
    RethrowWithContext(e, "example " + example.id);
  }
}

}  // namespace

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kFullDoc:
      return "fulldoc";
    case Strategy::kSummacZs:
      return "summac_zs";
    case Strategy::kSentli:
      return "sentli";
    case Strategy::kInfuse:
      return "infuse";
    case Strategy::kOneToOne:
      return "one_to_one";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kFullDoc, Strategy::kSummacZs, Strategy::kSentli,
                     Strategy::kInfuse, Strategy::kOneToOne}) {
    if (StrategyName(s) == name) return s;
  }
  throw ValidationError("unknown strategy \"" + std::string(name) +
                        "\" (expected fulldoc|summac_zs|sentli|infuse|"
                        "one_to_one)");
}

std::string_view NeutralStopName(NeutralStop s) {
  return s == NeutralStop::kUnlessDecreasing ? "decreasing" : "increasing";
}

NeutralStop ParseNeutralStop(std::string_view name) {
  if (name == "decreasing") return NeutralStop::kUnlessDecreasing;
  if (name == "increasing") return NeutralStop::kUnlessIncreasing;
  throw ValidationError("unknown neutral stop rule \"" + std::string(name) +
                        "\" (expected decreasing|increasing)");
}

EntailmentMatrix::EntailmentMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<NliDistribution> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ == 0 || cols_ == 0) {
    throw ValidationError("entailment matrix needs at least one row and column");
  }
  if (cells_.size() != rows_ * cols_) {
    throw ValidationError("entailment matrix has " +
                          std::to_string(cells_.size()) + " cells, expected " +
                          std::to_string(rows_ * cols_));
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].Validate("cell (" + std::to_string(i / cols_) + ", " +
                       std::to_string(i % cols_) + ")");
  }
}

EntailmentMatrix BuildMatrix(const CorpusExample& example, Scorer& scorer) {
  const std::size_t rows = example.doc_sents.size();
  const std::size_t cols = example.sum_sents.size();
  if (rows == 0 || cols == 0) {
    throw ValidationError("example " + example.id +
                          " has no document or summary sentences");
  }
  std::vector<ScorePair> pairs;
  pairs.reserve(rows * cols);
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t n = 0; n < cols; ++n) {
      pairs.push_back({example.doc_sents[m].text, example.sum_sents[n].text});
    }
  }
  std::vector<NliDistribution> cells;
  try {
    cells = scorer.Score(pairs, [cols](std::size_t i) {
      return "cell (" + std::to_string(i / cols) + ", " +
             std::to_string(i % cols) + ")";
    });
  } catch (const Error& e) {
    RethrowWithContext(e, "example " + example.id);
  }
  return EntailmentMatrix(rows, cols, std::move(cells));
}

PairFaithfulness ScoreOneToOne(const EntailmentMatrix& matrix, std::string id) {
  std::vector<double> scores(matrix.cols());
  for (std::size_t n = 0; n < matrix.cols(); ++n) {
    double best = matrix.at(0, n).entailment;
    for (std::size_t m = 1; m < matrix.rows(); ++m) {
      best = std::max(best, matrix.at(m, n).entailment);
    }
    scores[n] = best;
  }
  return PairScore(scores, std::move(id));
}

std::vector<SentenceFaithfulness> ScoreSummacZs(
    const EntailmentMatrix& matrix) {
  std::vector<SentenceFaithfulness> out;
  out.reserve(matrix.cols());
  for (std::size_t n = 0; n < matrix.cols(); ++n) {
    std::size_t best = 0;
    for (std::size_t m = 1; m < matrix.rows(); ++m) {
      if (matrix.at(m, n).entailment > matrix.at(best, n).entailment) best = m;
    }
    out.push_back(
        {n, matrix.at(best, n).entailment, Strategy::kSummacZs, {best}});
  }
  return out;
}

std::vector<SentenceFaithfulness> ScoreFullDoc(const CorpusExample& example,
                                               Scorer& scorer) {
  const std::size_t cols = example.sum_sents.size();
  std::vector<std::size_t> all(example.doc_sents.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> sentences(cols);
  std::iota(sentences.begin(), sentences.end(), 0);
  const std::vector<std::vector<std::size_t>> premises(cols, all);
  const auto dists =
      ScorePremises(example, scorer, sentences, premises, "full-document");
  std::vector<SentenceFaithfulness> out;
  out.reserve(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    out.push_back({n, dists[n].entailment, Strategy::kFullDoc, all});
  }
  return out;
}

std::vector<SentenceFaithfulness> ScoreSentli(const CorpusExample& example,
                                              const EntailmentMatrix& matrix,
                                              Scorer& scorer, int k) {
  if (k < 1) throw ValidationError("SeNtLI k must be >= 1");
  CheckShape(example, matrix);
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), rows);

  std::vector<std::size_t> sentences(cols);
  std::iota(sentences.begin(), sentences.end(), 0);
  std::vector<std::vector<std::size_t>> premises(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    const auto by_entail = RankRows(
        rows, [&](std::size_t m) { return matrix.at(m, n).entailment; });
    const auto by_contra = RankRows(
        rows, [&](std::size_t m) { return matrix.at(m, n).contradiction; });
    std::vector<std::size_t>& chosen = premises[n];
    chosen.assign(by_entail.begin(), by_entail.begin() + take);
    chosen.insert(chosen.end(), by_contra.begin(), by_contra.begin() + take);
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  }
  const auto dists = ScorePremises(example, scorer, sentences, premises, "SeNtLI");
  std::vector<SentenceFaithfulness> out;
  out.reserve(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    out.push_back(
        {n, dists[n].entailment, Strategy::kSentli, std::move(premises[n])});
  }
  return out;
}

std::vector<SentenceFaithfulness> ScoreSentli(const CorpusExample& example,
                                              Scorer& scorer, int k) {
  if (k < 1) throw ValidationError("SeNtLI k must be >= 1");
  return ScoreSentli(example, BuildMatrix(example, scorer), scorer, k);
}

std::vector<SentenceFaithfulness> ScoreInfuse(const CorpusExample& example,
                                              const EntailmentMatrix& matrix,
                                              Scorer& scorer,
                                              const InfuseOptions& options) {
  if (options.min_premise < 1) {
    throw ValidationError("InFusE min_premise must be >= 1");
  }
  CheckShape(example, matrix);
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  const std::size_t floor =
      std::min<std::size_t>(static_cast<std::size_t>(options.min_premise), rows);

  struct State {
    std::vector<std::size_t> ranking;
    NliDistribution last;      // distribution of the last accepted premise
    std::size_t accepted = 0;  // size of the last accepted premise
    bool done = false;
  };
  std::vector<State> states(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    states[n].ranking = RankRows(
        rows, [&](std::size_t m) { return matrix.at(m, n).entailment; });
  }

  // All still-growing sentences advance one step per scorer batch; each
  // sentence's trajectory is the same as scoring it alone.
  for (std::size_t size = 1; size <= rows; ++size) {
    std::vector<std::size_t> active;
    std::vector<std::vector<std::size_t>> premises;
    for (std::size_t n = 0; n < cols; ++n) {
      if (states[n].done) continue;
      std::vector<std::size_t> premise(states[n].ranking.begin(),
                                       states[n].ranking.begin() + size);
      std::sort(premise.begin(), premise.end());
      active.push_back(n);
      premises.push_back(std::move(premise));
    }
    if (active.empty()) break;
    const auto dists = ScorePremises(example, scorer, active, premises, "InFusE");
    for (std::size_t j = 0; j < active.size(); ++j) {
      State& st = states[active[j]];
      const NliDistribution& d = dists[j];
      if (size > floor) {
        const bool keep_growing =
            options.stop == NeutralStop::kUnlessDecreasing
                ? d.neutral < st.last.neutral - options.eps
                : d.neutral > st.last.neutral + options.eps;
        if (!keep_growing) {
          st.done = true;
          continue;
        }
      }
      st.last = d;
      st.accepted = size;
    }
  }

  std::vector<SentenceFaithfulness> out;
  out.reserve(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    std::vector<std::size_t> premise(
        states[n].ranking.begin(),
        states[n].ranking.begin() + states[n].accepted);
    std::sort(premise.begin(), premise.end());
    out.push_back(
        {n, states[n].last.entailment, Strategy::kInfuse, std::move(premise)});
  }
  return out;
}

std::vector<SentenceFaithfulness> ScoreInfuse(const CorpusExample& example,
                                              Scorer& scorer,
                                              const InfuseOptions& options) {
  if (options.min_premise < 1) {
    throw ValidationError("InFusE min_premise must be >= 1");
  }
  return ScoreInfuse(example, BuildMatrix(example, scorer), scorer, options);
}

PairFaithfulness PairScore(std::span<const double> sentence_scores,
                           std::string id) {
  if (sentence_scores.empty()) {
    throw ValidationError("cannot aggregate an empty list of sentence scores");
  }
  PairFaithfulness out;
  out.id = std::move(id);
  out.sentence_scores.assign(sentence_scores.begin(), sentence_scores.end());
  double sum = 0.0;
  for (double s : sentence_scores) sum += s;
  out.aggregate = sum / static_cast<double>(sentence_scores.size());
  return out;
}

PairFaithfulness PairScore(std::span<const SentenceFaithfulness> sentences,
                           std::string id) {
  std::vector<double> scores;
  scores.reserve(sentences.size());
  for (const SentenceFaithfulness& s : sentences) scores.push_back(s.score);
  return PairScore(scores, std::move(id));
}

ScoredExample ScoreExample(const CorpusExample& example, Scorer& scorer,
                           const StrategyOptions& options) {
  ScoredExample out{example.id, options.strategy, {}, 0.0};
  switch (options.strategy) {
    case Strategy::kFullDoc:
      out.sentences = ScoreFullDoc(example, scorer);
      break;
    case Strategy::kSummacZs:
      out.sentences = ScoreSummacZs(BuildMatrix(example, scorer));
      break;
    case Strategy::kSentli:
      out.sentences = ScoreSentli(example, scorer, options.k);
      break;
    case Strategy::kInfuse:
      out.sentences = ScoreInfuse(example, scorer, options.infuse);
      break;
    case Strategy::kOneToOne: {
      const PairFaithfulness pair =
          ScoreOneToOne(BuildMatrix(example, scorer), example.id);
      for (std::size_t n = 0; n < pair.sentence_scores.size(); ++n) {
        out.sentences.push_back(
            {n, pair.sentence_scores[n], Strategy::kOneToOne, {}});
      }
      break;
    }
  }
  out.aggregate = PairScore(out.sentences).aggregate;
  return out;
}

std::string SerializeScores(const ScoredExample& scored) {
  json scores = json::array();
  json premises = json::array();
  for (const SentenceFaithfulness& s : scored.sentences) {
    scores.push_back(s.score);
    premises.push_back(s.premises);
  }
  json record = json::object();
  record["id"] = scored.id;
  record["strategy"] = StrategyName(scored.strategy);
  record["sent_scores"] = std::move(scores);
  record["premises"] = std::move(premises);
  record["aggregate"] = scored.aggregate;
  return record.dump();
}

ScoredExample ParseScores(std::string_view line) {
  try {
    const json record = json::parse(line);
    ScoredExample out;
    out.id = record.at("id").get<std::string>();
    out.strategy = ParseStrategy(record.at("strategy").get<std::string>());
    const auto scores = record.at("sent_scores").get<std::vector<double>>();
    auto premises = record.at("premises")
                        .get<std::vector<std::vector<std::size_t>>>();
    if (premises.size() != scores.size()) {
      throw ParseError("premises and sent_scores differ in length");
    }
    for (std::size_t n = 0; n < scores.size(); ++n) {
      out.sentences.push_back(
          {n, scores[n], out.strategy, std::move(premises[n])});
    }
    out.aggregate = record.at("aggregate").get<double>();
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scores record: ") + e.what());
  }
}

}  // namespace xfaith
