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
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.h"
#include "xfaith/error.h"

namespace xfaith {
namespace {

using testing::Dist;
using testing::FunctionScorer;
using testing::MakeExample;

EntailmentMatrix FromEntailment(
    const std::vector<std::vector<double>>& e) {  // e[m][n]
  std::vector<NliDistribution> cells;
  for (const auto& row : e) {
    for (double v : row) cells.push_back(Dist(v, (1 - v) / 2, (1 - v) / 2));
  }
  return EntailmentMatrix(e.size(), e[0].size(), cells);
}

std::vector<double> Scores(const std::vector<SentenceFaithfulness>& s) {
  std::vector<double> out;
  for (const auto& x : s) out.push_back(x.score);
  return out;
}

// Scores premises from a table; unknown premises fall back to the mock.
FunctionScorer TableScorer(std::map<std::string, NliDistribution> table) {
  return FunctionScorer([table](const std::string& p, const std::string& h) {
    auto it = table.find(p);
    return it != table.end() ? it->second : MockScore(p, h, 0);
  });
}

TEST_CASE("strategy names") {
  for (Strategy s : {Strategy::kFullDoc, Strategy::kSummacZs, Strategy::kSentli,
                     Strategy::kInfuse, Strategy::kOneToOne}) {
    CHECK(ParseStrategy(StrategyName(s)) == s);
  }
  CHECK_THROWS_AS(ParseStrategy("many_to_one"), ValidationError);
  CHECK(ParseNeutralStop(NeutralStopName(NeutralStop::kUnlessIncreasing)) ==
        NeutralStop::kUnlessIncreasing);
}

TEST_CASE("matrix construction") {
  FunctionScorer scorer = testing::CountingMock(1);
  const CorpusExample ex = MakeExample("a", {"p one", "p two"}, {"h1", "h2"});
  const EntailmentMatrix m = BuildMatrix(ex, scorer);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(scorer.pairs_scored() == 4);
  CHECK(m.at(1, 0) == MockScore("p two", "h1", 1));

  FunctionScorer single = testing::CountingMock(1);
  const CorpusExample one = MakeExample("b", {"p"}, {"h"});
  const EntailmentMatrix m1 = BuildMatrix(one, single);
  CHECK(m1.at(0, 0) == single.ScoreOne("p", "h"));

  CHECK_THROWS_AS(EntailmentMatrix(1, 1, {Dist(0.5, 0.5, 0.5)}),
                  ValidationError);
  CHECK_THROWS_AS(EntailmentMatrix(2, 1, {Dist(0.5, 0.5, 0.0)}),
                  ValidationError);
}

TEST_CASE("planted cell stands out in its column") {
  MockScorer scorer(3);
  const CorpusExample ex = MakeExample(
      "a", {"alpha beta", "gamma delta", "epsilon zeta", "eta theta"},
      {"zeta", "omega"});
  const EntailmentMatrix m = BuildMatrix(ex, scorer);
  CHECK(m.at(2, 0).entailment > 0.9);
  for (std::size_t r : {0, 1, 3}) {
    CHECK(m.at(r, 0).entailment < m.at(2, 0).entailment);
  }
}

TEST_CASE("scorer errors carry the cell") {
  FunctionScorer bad([](const std::string& p, const std::string&) {
    return p == "p2" ? Dist(0.9, 0.9, 0.9) : Dist(0.2, 0.3, 0.5);
  });
  const CorpusExample ex = MakeExample("ex9", {"p1", "p2"}, {"h"});
  try {
    BuildMatrix(ex, bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("ex9") != std::string::npos);
    CHECK(what.find("(1, 0)") != std::string::npos);
  }
}

TEST_CASE("one-to-one column max") {
  const PairFaithfulness p =
      ScoreOneToOne(FromEntailment({{0.9, 0.1}, {0.2, 0.8}}), "x");
  CHECK(p.sentence_scores == std::vector<double>{0.9, 0.8});
  CHECK(p.aggregate == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(ScoreOneToOne(FromEntailment({{0.3}, {0.7}})).sentence_scores[0] ==
        0.7);
  const PairFaithfulness flat =
      ScoreOneToOne(FromEntailment({{0.5, 0.5}, {0.5, 0.5}}));
  CHECK(flat.sentence_scores == std::vector<double>{0.5, 0.5});
  CHECK(flat.aggregate == 0.5);
}

TEST_CASE("SummaC-ZS premises and ties") {
  const auto s = ScoreSummacZs(FromEntailment({{0.9, 0.1}, {0.2, 0.8}}));
  CHECK(Scores(s) == std::vector<double>{0.9, 0.8});
  CHECK(s[0].premises == std::vector<std::size_t>{0});
  CHECK(s[1].premises == std::vector<std::size_t>{1});
  CHECK(ScoreSummacZs(FromEntailment({{0.6}, {0.6}}))[0].premises ==
        std::vector<std::size_t>{0});
  for (const auto& x : ScoreSummacZs(FromEntailment({{0.1, 0.4, 0.3}}))) {
    CHECK(x.premises == std::vector<std::size_t>{0});
  }
}

TEST_CASE("raising a column maximum never lowers the score") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 4;
    std::vector<std::vector<double>> e(rows, std::vector<double>(cols));
    for (auto& r : e) for (double& v : r) v = u(rng);
    const auto before = ScoreOneToOne(FromEntailment(e)).sentence_scores;
    const std::size_t m = rng() % rows, n = rng() % cols;
    e[m][n] = std::min(1.0, e[m][n] + u(rng) * 0.5);
    const auto after = ScoreOneToOne(FromEntailment(e)).sentence_scores;
    CHECK(after[n] >= before[n]);
  }
}

TEST_CASE("FullDoc scores the joined document") {
  FunctionScorer scorer = testing::CountingMock(2);
  const CorpusExample ex =
      MakeExample("a", {"First one.", "Second.", "Third."}, {"h1", "h2"});
  const auto s = ScoreFullDoc(ex, scorer);
  CHECK(scorer.pairs_scored() == 2);
  for (const std::string& p : scorer.premises_seen()) {
    CHECK(p == "First one. Second. Third.");
  }
  CHECK(s[1].score == MockScore("First one. Second. Third.", "h2", 2).entailment);
  CHECK(s[0].premises == std::vector<std::size_t>{0, 1, 2});

  MockScorer mock(2);
  const CorpusExample single = MakeExample("b", {"only"}, {"h1", "h2"});
  CHECK(Scores(ScoreFullDoc(single, mock)) ==
        Scores(ScoreSummacZs(BuildMatrix(single, mock))));
}

TEST_CASE("SeNtLI union of entailment and contradiction top-k") {
  std::map<std::string, NliDistribution> table;
  for (int m = 0; m < 8; ++m) {
    table["s" + std::to_string(m)] = Dist(0.2, 0.5, 0.3);
  }
  table["s3"] = Dist(0.8, 0.1, 0.1);
  table["s5"] = Dist(0.5, 0.0, 0.5);
  table["s7"] = Dist(0.2, 0.1, 0.7);
  table["s3 s5 s7"] = Dist(0.61, 0.2, 0.19);
  FunctionScorer scorer = TableScorer(table);
  std::vector<std::string> doc;
  for (int m = 0; m < 8; ++m) doc.push_back("s" + std::to_string(m));
  const CorpusExample ex = MakeExample("a", doc, {"h"});
  const auto s = ScoreSentli(ex, scorer, 2);
  CHECK(s[0].premises == std::vector<std::size_t>{3, 5, 7});
  CHECK(s[0].score == 0.61);
  CHECK(s[0].strategy == Strategy::kSentli);

  // k = 1: argmax entailment and argmax contradiction.
  table["s3 s7"] = Dist(0.4, 0.3, 0.3);
  FunctionScorer k1 = TableScorer(table);
  CHECK(ScoreSentli(ex, k1, 1)[0].premises ==
        std::vector<std::size_t>{3, 7});
  CHECK_THROWS_AS(ScoreSentli(ex, k1, 0), ValidationError);
}

TEST_CASE("SeNtLI with one sentence winning both rankings") {
  std::map<std::string, NliDistribution> table = {
      {"a", Dist(0.5, 0.0, 0.5)}, {"b", Dist(0.1, 0.6, 0.3)},
      {"c", Dist(0.2, 0.5, 0.3)}};
  FunctionScorer scorer = TableScorer(table);
  const CorpusExample ex = MakeExample("x", {"a", "b", "c"}, {"h"});
  CHECK(ScoreSentli(ex, scorer, 1)[0].premises ==
        std::vector<std::size_t>{0});
}

// Doc sentences d0..d3 ranked d2, d0, d3, d1 by entailment; neutral of the
// growing premise runs 0.30, 0.25, 0.26, 0.05.
std::map<std::string, NliDistribution> InfuseTable() {
  return {
      {"d0", Dist(0.60, 0.20, 0.20)},        {"d1", Dist(0.10, 0.30, 0.60)},
      {"d2", Dist(0.65, 0.30, 0.05)},        {"d3", Dist(0.30, 0.40, 0.30)},
      {"d0 d2", Dist(0.55, 0.25, 0.20)},     {"d0 d2 d3", Dist(0.50, 0.26, 0.24)},
      {"d0 d1 d2 d3", Dist(0.90, 0.05, 0.05)},
  };
}

TEST_CASE("InFusE stops once neutral stops decreasing") {
  FunctionScorer scorer = TableScorer(InfuseTable());
  const CorpusExample ex = MakeExample("a", {"d0", "d1", "d2", "d3"}, {"h"});
  InfuseOptions options;
  options.min_premise = 1;
  const auto s = ScoreInfuse(ex, scorer, options);
  CHECK(s[0].score == 0.55);
  CHECK(s[0].premises == std::vector<std::size_t>{0, 2});
  // 4 matrix cells, then premises of size 1, 2 and 3.
  CHECK(scorer.pairs_scored() == 7);

  // A tolerance wide enough to absorb the rise keeps growing.
  options.eps = -0.02;
  FunctionScorer again = TableScorer(InfuseTable());
  const auto loose = ScoreInfuse(ex, again, options);
  CHECK(loose[0].premises == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(loose[0].score == 0.90);
  options.eps = 0.0;

  options.stop = NeutralStop::kUnlessIncreasing;
  FunctionScorer inc = TableScorer(InfuseTable());
  CHECK(ScoreInfuse(ex, inc, options)[0].score == 0.65);

  options.stop = NeutralStop::kUnlessDecreasing;
  options.min_premise = 3;
  FunctionScorer floor = TableScorer(InfuseTable());
  const auto floored = ScoreInfuse(ex, floor, options);
  CHECK(floored[0].score == 0.90);
  CHECK(floored[0].premises.size() == 4);
}

TEST_CASE("InFusE with infinite tolerance stops at the floor") {
  std::mt19937_64 rng(23);
  MockScorer scorer(23);
  for (int trial = 0; trial < 30; ++trial) {
    const CorpusExample ex =
        testing::RandomExample(rng, "r", 1 + rng() % 9, 1 + rng() % 3);
    InfuseOptions options;
    options.min_premise = 1 + static_cast<int>(rng() % 6);
    options.eps = std::numeric_limits<double>::infinity();
    for (const auto& s : ScoreInfuse(ex, scorer, options)) {
      CHECK(s.premises.size() ==
            std::min<std::size_t>(options.min_premise, ex.doc_sents.size()));
    }
  }
  const CorpusExample ex = MakeExample("a", {"x"}, {"y"});
  InfuseOptions bad;
  bad.min_premise = 0;
  CHECK_THROWS_AS(ScoreInfuse(ex, scorer, bad), ValidationError);
}

TEST_CASE("InFusE ranks ties by document order") {
  std::map<std::string, NliDistribution> table = {
      {"a", Dist(0.5, 0.3, 0.2)}, {"b", Dist(0.5, 0.3, 0.2)},
      {"c", Dist(0.5, 0.3, 0.2)}};
  FunctionScorer scorer = TableScorer(table);
  const CorpusExample ex = MakeExample("t", {"a", "b", "c"}, {"h"});
  InfuseOptions options;
  options.min_premise = 1;
  options.eps = std::numeric_limits<double>::infinity();
  CHECK(ScoreInfuse(ex, scorer, options)[0].premises ==
        std::vector<std::size_t>{0});
}

TEST_CASE("equivalences on random corpora") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    MockScorer scorer(trial);
    const CorpusExample ex =
        testing::RandomExample(rng, "r", 1 + rng() % 8, 1 + rng() % 4);
    const EntailmentMatrix m = BuildMatrix(ex, scorer);
    CHECK(ScoreOneToOne(m).sentence_scores == Scores(ScoreSummacZs(m)));
    const auto full = Scores(ScoreFullDoc(ex, scorer));
    InfuseOptions big;
    big.min_premise = static_cast<int>(ex.doc_sents.size() + rng() % 3);
    CHECK(Scores(ScoreInfuse(ex, m, scorer, big)) == full);
    const int k = static_cast<int>(ex.doc_sents.size() + rng() % 3);
    CHECK(Scores(ScoreSentli(ex, m, scorer, k)) == full);
  }
}

TEST_CASE("reported scores and premises are well formed") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    MockScorer scorer(trial);
    const CorpusExample ex =
        testing::RandomExample(rng, "r", 1 + rng() % 10, 1 + rng() % 3);
    for (Strategy st : {Strategy::kFullDoc, Strategy::kSummacZs,
                        Strategy::kSentli, Strategy::kInfuse}) {
      StrategyOptions options;
      options.strategy = st;
      options.k = 1 + static_cast<int>(rng() % 4);
      options.infuse.min_premise = 1 + static_cast<int>(rng() % 4);
      for (const auto& s : ScoreExample(ex, scorer, options).sentences) {
        CHECK(s.score >= 0.0);
        CHECK(s.score <= 1.0);
        CHECK_FALSE(s.premises.empty());
        CHECK(std::is_sorted(s.premises.begin(), s.premises.end()));
        CHECK(std::adjacent_find(s.premises.begin(), s.premises.end()) ==
              s.premises.end());
        CHECK(s.premises.back() < ex.doc_sents.size());
      }
    }
  }
}

TEST_CASE("permuting summary sentences permutes scores") {
  std::mt19937_64 rng(37);
  MockScorer scorer(37);
  for (int trial = 0; trial < 40; ++trial) {
    CorpusExample ex = testing::RandomExample(rng, "r", 1 + rng() % 7, 4);
    CorpusExample rev = ex;
    std::vector<std::string> texts;
    for (auto it = ex.sum_sents.rbegin(); it != ex.sum_sents.rend(); ++it) {
      texts.push_back(it->text);
    }
    rev.sum_sents = MakeSentences(texts);
    StrategyOptions options;
    options.infuse.min_premise = 2;
    const ScoredExample a = ScoreExample(ex, scorer, options);
    const ScoredExample b = ScoreExample(rev, scorer, options);
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(a.sentences[n].score == b.sentences[3 - n].score);
    }
    CHECK(a.aggregate == doctest::Approx(b.aggregate).epsilon(1e-12));
  }
}

TEST_CASE("pair score") {
  CHECK(PairScore(std::vector<double>{0.2, 0.4, 0.6}).aggregate ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(PairScore(std::vector<double>{0.7}).aggregate == 0.7);
  CHECK(PairScore(std::vector<double>{0.3, 0.3, 0.3}).aggregate ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(PairScore(std::vector<double>{}), ValidationError);
}

TEST_CASE("scores JSONL round trip") {
  MockScorer scorer(5);
  const CorpusExample ex = MakeExample("id-1", {"a b", "c d", "e"}, {"b", "z"});
  for (Strategy st : {Strategy::kFullDoc, Strategy::kSummacZs,
                      Strategy::kSentli, Strategy::kInfuse,
                      Strategy::kOneToOne}) {
    StrategyOptions options;
    options.strategy = st;
    const ScoredExample s = ScoreExample(ex, scorer, options);
    const std::string line = SerializeScores(s);
    const ScoredExample back = ParseScores(line);
    CHECK(back.id == "id-1");
    CHECK(back.strategy == st);
    CHECK(Scores(back.sentences) == Scores(s.sentences));
    CHECK(back.aggregate == s.aggregate);
    CHECK(SerializeScores(back) == line);
  }
  CHECK_THROWS(ParseScores("{\"id\":1}"));
}

}  // namespace
}  // namespace xfaith
