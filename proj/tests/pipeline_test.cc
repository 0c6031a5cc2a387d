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

#include "xfaith/pipeline.h"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_util.h"
#include "xfaith/error.h"
#include "xfaith/io.h"

namespace xfaith {
namespace {

using nlohmann::json;
using testing::RunCli;
using testing::Slurp;
using testing::TempDir;
using testing::WriteText;

std::size_t CountLines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

void WritePlanted(const TempDir& dir, std::size_t n, std::uint64_t seed = 1) {
  WriteText(dir / "corpus.jsonl",
            SerializeCorpus(testing::MakePlantedCorpus(n, seed).corpus));
}

TEST_CASE("config JSON round trip and validation") {
  RunConfig c;
  c.strategy = "sentli";
  c.k = 3;
  c.pct = {10, 20};
  c.neutral_stop = "increasing";
  const RunConfig back = RunConfig::FromJson(c.ToJson());
  CHECK(back.ToJson() == c.ToJson());
  CHECK(RunConfig::FromJson(json{{"pct", 30}}).pct == std::vector<double>{30});

  auto message = [](const json& j) {
    try {
      RunConfig::FromJson(j);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(json{{"bogus", 1}}).find("bogus") != std::string::npos);
  CHECK(message(json{{"k", 0}}).find("k:") != std::string::npos);
  CHECK(message(json{{"k", "three"}}).find("k") != std::string::npos);
  CHECK(message(json{{"min-premise", 0}}).find("min-premise") !=
        std::string::npos);
  CHECK(message(json{{"pct", 120}}).find("pct") != std::string::npos);
  CHECK(message(json{{"fraction", 0}}).find("fraction") != std::string::npos);
  CHECK(message(json{{"scorer", "cache"}}).find("cache") != std::string::npos);
  CHECK(message(json{{"scorer", "gpu"}}).find("scorer") != std::string::npos);
  CHECK_FALSE(message(json{{"strategy", "best"}}).empty());
  CHECK_FALSE(message(json{{"neutral-stop", "sideways"}}).empty());
  CHECK_FALSE(message(json{{"jobs", 0}}).empty());
}

TEST_CASE("ScoreCorpus keeps corpus order and the earliest error") {
  const Corpus corpus = testing::MakePlantedCorpus(20, 3).corpus;
  MockScorer scorer(3);
  StrategyOptions options;
  const auto serial = ScoreCorpus(corpus, scorer, options, 1);
  const auto parallel = ScoreCorpus(corpus, scorer, options, 6);
  REQUIRE(parallel.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(parallel[i].id == corpus[i].id);
    CHECK(SerializeScores(parallel[i]) == SerializeScores(serial[i]));
  }

  testing::FunctionScorer failing(
      [](const std::string& p, const std::string& h) {
        if (p.find("w7") != std::string::npos) {
          return testing::Dist(2, 0, 0);
        }
        return MockScore(p, h, 0);
      });
  std::size_t first_bad = corpus.size();
  for (std::size_t i = 0; i < corpus.size() && first_bad == corpus.size(); ++i) {
    if (corpus[i].DocumentText().find("w7") != std::string::npos) first_bad = i;
  }
  REQUIRE(first_bad < corpus.size());
  try {
    ScoreCorpus(corpus, failing, options, 4);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("example " + corpus[first_bad].id) !=
          std::string::npos);
  }
}

TEST_CASE("score writes records and a manifest") {
  TempDir dir;
  WritePlanted(dir, 3);
  RunConfig c;
  c.in = (dir / "corpus.jsonl").string();
  c.out = (dir / "scores.jsonl").string();
  c.matrix = (dir / "matrix.jsonl").string();
  std::ostringstream report;
  RunSubcommand("score", c, report);
  const std::string scores = Slurp(c.out);
  CHECK(CountLines(scores) == 3);
  CHECK(CountLines(Slurp(c.matrix)) == 3);
  const json manifest = json::parse(Slurp(c.out + ".manifest.json"));
  CHECK(manifest["subcommand"] == "score");
  CHECK(manifest["scorer_id"] == "mock@seed=0");
  CHECK(manifest["config"]["strategy"] == "infuse");
  CHECK(manifest["config_sha256"].get<std::string>().size() == 64);
  CHECK(manifest["inputs"].contains(c.in));
  CHECK(manifest["outputs"][c.out] == Sha256Hex(scores));
  CHECK(manifest["outputs"].contains(c.matrix));
  // No temp files left behind.
  for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("read-through cache and replay give identical scores") {
  TempDir dir;
  WritePlanted(dir, 5);
  RunConfig c;
  c.in = (dir / "corpus.jsonl").string();
  c.cache = (dir / "scores.cache").string();
  c.seed = 9;
  c.out = (dir / "a.jsonl").string();
  std::ostringstream report;
  RunSubcommand("score", c, report);
  const ScoreCache cache = ScoreCache::Load(c.cache);
  CHECK(cache.scorer_id() == "mock@seed=9");
  CHECK(cache.size() > 0);

  RunConfig replay = c;
  replay.scorer = "cache";
  replay.out = (dir / "b.jsonl").string();
  RunSubcommand("score", replay, report);
  CHECK(Slurp(c.out) == Slurp(replay.out));

  // Asking the replay for anything new is an error, not a silent miss.
  RunConfig other = replay;
  other.strategy = "fulldoc";
  other.out = (dir / "c.jsonl").string();
  CHECK_THROWS_AS(RunSubcommand("score", other, report), ValidationError);

  // A cache from another scorer is refused.
  RunConfig wrong = c;
  wrong.seed = 10;
  CHECK_THROWS_AS(RunSubcommand("score", wrong, report), ValidationError);
}

TEST_CASE("annotate, transform and Test_Faith chain") {
  TempDir dir;
  WritePlanted(dir, 12);
  std::ostringstream report;
  RunConfig score;
  score.in = (dir / "corpus.jsonl").string();
  score.out = (dir / "scores.jsonl").string();
  RunSubcommand("score", score, report);
  const auto scored_lines = CountLines(Slurp(score.out));
  CHECK(scored_lines == 12);

  RunConfig annotate;
  annotate.in = score.out;
  annotate.out = (dir / "labels.jsonl").string();
  annotate.pct = {20};
  RunSubcommand("annotate", annotate, report);
  const std::string labels = Slurp(annotate.out);
  std::size_t sentences = 0, no = 0;
  std::istringstream lines(labels);
  for (std::string line; std::getline(lines, line);) {
    ++sentences;
    no += ParseAnnotation(line).label == Faithful::kNo;
  }
  CHECK(no == sentences * 20 / 100);

  RunConfig sweep = annotate;
  sweep.pct = {10, 50};
  RunSubcommand("annotate", sweep, report);
  CHECK(std::filesystem::exists(dir / "labels.pct10.jsonl"));
  CHECK(std::filesystem::exists(dir / "labels.pct50.jsonl.manifest.json"));

  RunConfig clean = annotate;
  clean.mode = "clean";
  clean.pct = {25};
  clean.out = (dir / "removal.txt").string();
  RunSubcommand("annotate", clean, report);
  std::ifstream removal_in(clean.out);
  CHECK(RemovalSet::Parse(removal_in).ids.size() == 3);

  RunConfig keep;
  keep.in = (dir / "corpus.jsonl").string();
  keep.out = (dir / "clean.jsonl").string();
  keep.mode = "clean";
  keep.removal = clean.out;
  RunSubcommand("transform", keep, report);
  CHECK(CountLines(Slurp(keep.out)) == 9);

  RunConfig random = keep;
  random.mode = "random";
  random.pct = {25};
  random.out = (dir / "random.jsonl").string();
  RunSubcommand("transform", random, report);
  CHECK(CountLines(Slurp(random.out)) == 9);

  for (const std::string mode : {"mask", "unlike"}) {
    RunConfig t;
    t.in = (dir / "corpus.jsonl").string();
    t.out = (dir / (mode + ".jsonl")).string();
    t.mode = mode;
    t.labels = annotate.out;
    RunSubcommand("transform", t, report);
    CHECK(CountLines(Slurp(t.out)) == 12);
  }

  // Labels that skip a sentence are rejected.
  std::istringstream all(labels);
  std::string first;
  std::getline(all, first);
  WriteText(dir / "partial.jsonl", labels.substr(first.size() + 1));
  RunConfig partial;
  partial.in = (dir / "corpus.jsonl").string();
  partial.out = (dir / "bad.jsonl").string();
  partial.mode = "mask";
  partial.labels = (dir / "partial.jsonl").string();
  CHECK_THROWS_AS(RunSubcommand("transform", partial, report),
                  ValidationError);

  std::string similarity;
  for (int i = 0; i < 12; ++i) {
    similarity += json{{"id", "ex" + std::to_string(i)},
                       {"score", (i % 5) / 5.0}}.dump() + "\n";
  }
  WriteText(dir / "sim.jsonl", similarity);
  RunConfig tf;
  tf.in = score.out;
  tf.mode = "test_faith";
  tf.similarity = (dir / "sim.jsonl").string();
  tf.fraction = 0.25;
  tf.out = (dir / "test_faith.txt").string();
  RunSubcommand("annotate", tf, report);
  std::ifstream tf_in(tf.out);
  CHECK(RemovalSet::Parse(tf_in).ids.size() == 3);
}

TEST_CASE("benchmark subcommand reports the total") {
  TempDir dir;
  std::string records;
  for (int i = 0; i < 238; ++i) {
    const bool yes = i % 3 != 0;
    records += json{{"id", "ex" + std::to_string(i / 2)},
                    {"sent_idx", i % 2},
                    {"judgements", yes ? json{"yes", "yes", "partial"}
                                       : json{"no", "no", "yes"}},
                    {"scores", {{"infuse", yes ? 0.9 : 0.1},
                                {"fulldoc", (i % 7) / 7.0}}}}
                   .dump() +
               "\n";
  }
  WriteText(dir / "bench.jsonl", records);
  RunConfig c;
  c.in = (dir / "bench.jsonl").string();
  std::ostringstream report;
  RunSubcommand("benchmark", c, report);
  CHECK(report.str().find("# n=238") != std::string::npos);
  CHECK(report.str().find("infuse\t100.00") != std::string::npos);
}

TEST_CASE("stats, loss-check and xnli-pairs") {
  TempDir dir;
  WritePlanted(dir, 4);
  RunConfig stats;
  stats.in = (dir / "corpus.jsonl").string();
  std::ostringstream report;
  RunSubcommand("stats", stats, report);
  CHECK(report.str().rfind("Statistic\tde-en\n", 0) == 0);

  RunConfig loss;
  loss.seed = 4;
  std::ostringstream loss_report;
  RunSubcommand("loss-check", loss, loss_report);
  CHECK(loss_report.str().find("mle\t") != std::string::npos);
  CHECK(loss_report.str().find("FAIL") == std::string::npos);

  WriteText(dir / "loss.json",
            R"({"logits":[[0,0,0],[0,0,0]],"targets":[0,1],"faithful":[1,0]})");
  RunConfig fixed;
  fixed.in = (dir / "loss.json").string();
  fixed.alpha = 0.5;
  std::ostringstream fixed_report;
  RunSubcommand("loss-check", fixed, fixed_report);
  CHECK(fixed_report.str().find("unlike\t2.39995") != std::string::npos);

  WriteText(dir / "xnli.jsonl",
            R"({"gold_label":"entailment","premise":{"fr":"Il y a tellement","en":"So much"},"hypothesis":{"fr":"Je n'en parlerai pas","en":"tellement"}})"
            "\n");
  RunConfig pairs;
  pairs.in = (dir / "xnli.jsonl").string();
  pairs.premise_lang = "fr";
  pairs.hypothesis_lang = "en";
  pairs.out = (dir / "pairs.jsonl").string();
  pairs.evaluate = true;
  std::ostringstream pair_report;
  RunSubcommand("xnli-pairs", pairs, pair_report);
  CHECK(pair_report.str() == "fr->en\taccuracy=100.00\tn=1\n");
  CHECK(json::parse(Slurp(pairs.out))["premise"] == "Il y a tellement");
}

TEST_CASE("cli: score, determinism and exit codes") {
  TempDir dir;
  WritePlanted(dir, 15, 5);
  auto r = RunCli(dir,
                  "score --in corpus.jsonl --out a.jsonl --scorer mock "
                  "--strategy infuse --min-premise 5 --seed 3");
  CHECK_MESSAGE(r.code == 0, r.err);
  r = RunCli(dir,
             "score --in corpus.jsonl --out b.jsonl --seed 3 --jobs 4");
  CHECK_MESSAGE(r.code == 0, r.err);
  CHECK(Slurp(dir / "a.jsonl") == Slurp(dir / "b.jsonl"));
  CHECK(CountLines(Slurp(dir / "a.jsonl")) == 15);

  // Config file with a flag override.
  WriteText(dir / "run.json",
            R"({"in":"corpus.jsonl","out":"c.jsonl","seed":3,"strategy":"fulldoc"})");
  r = RunCli(dir, "score --config run.json --strategy infuse");
  CHECK_MESSAGE(r.code == 0, r.err);
  CHECK(Slurp(dir / "c.jsonl") == Slurp(dir / "a.jsonl"));

  r = RunCli(dir, "score --out x.jsonl");
  CHECK(r.code == 1);
  CHECK(r.err.find("--in") != std::string::npos);
  r = RunCli(dir, "score --in corpus.jsonl --k 0");
  CHECK(r.code == 1);
  CHECK(r.err.find("k:") != std::string::npos);
  r = RunCli(dir, "score --in corpus.jsonl --no-such-flag");
  CHECK(r.code == 1);
  r = RunCli(dir, "");
  CHECK(r.code == 1);
  WriteText(dir / "broken.jsonl", "{\"id\":\"a\"}\n");
  r = RunCli(dir, "score --in broken.jsonl");
  CHECK(r.code == 1);
  CHECK(r.err.find("line 1") != std::string::npos);
  WriteText(dir / "bad.json", R"({"strategy":"infuse","typo":1})");
  r = RunCli(dir, "score --config bad.json --in corpus.jsonl");
  CHECK(r.code == 1);
  CHECK(r.err.find("typo") != std::string::npos);
}

TEST_CASE("cli: remote scorer failures are transport errors") {
  TempDir dir;
  WritePlanted(dir, 2);
  auto r = RunCli(dir, "score --in corpus.jsonl --scorer remote",
                  "XFAITH_ENDPOINT=http://127.0.0.1:1");
  CHECK(r.code == 2);
  CHECK(r.err.find("127.0.0.1:1") != std::string::npos);
}

TEST_CASE("cli: other subcommands") {
  TempDir dir;
  WritePlanted(dir, 10);
  auto r = RunCli(dir, "score --in corpus.jsonl --out s.jsonl");
  REQUIRE(r.code == 0);
  r = RunCli(dir, "annotate --in s.jsonl --out l.jsonl --pct 10 --pct 30");
  CHECK_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("pct=10 labelled") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "l.pct30.jsonl"));
  r = RunCli(dir, "transform --in corpus.jsonl --out u.jsonl --mode unlike "
                  "--labels l.pct30.jsonl");
  CHECK_MESSAGE(r.code == 0, r.err);
  r = RunCli(dir, "stats --in corpus.jsonl --out stats.tsv");
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "stats.tsv.manifest.json"));
  r = RunCli(dir, "loss-check --seed 2 --alpha 0.3 --unlike-form literal");
  CHECK(r.code == 0);
  CHECK(r.out.find("unlike_form=literal") != std::string::npos);
  r = RunCli(dir, "transform --in corpus.jsonl --out z.jsonl --mode shred");
  CHECK(r.code == 1);
}

}  // namespace
}  // namespace xfaith
