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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "xfaith/annotate.h"
#include "xfaith/benchmark.h"
#include "xfaith/error.h"
#include "xfaith/io.h"
#include "xfaith/losses.h"
#include "xfaith/remote_scorer.h"
#include "xfaith/textmetrics.h"
#include "xfaith/transform.h"
#include "xfaith/unicode.h"

namespace xfaith {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

template <typename T>
T Field(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config field \"") + key +
                          "\" has the wrong type");
  }
}

std::ifstream OpenInput(const std::string& path, const char* what) {
  if (path.empty()) {
    throw ValidationError(std::string("--") + what + " is required");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::string FormatNumber(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// "a/b.jsonl" + 10 -> "a/b.pct10.jsonl"
std::string SweepPath(const std::string& out, double pct) {
  const fs::path p(out);
  fs::path name = p.stem();
  name += ".pct" + FormatNumber(pct);
  name += p.extension();
  return (p.parent_path() / name).string();
}

void WriteManifest(std::string_view subcommand, const RunConfig& config,
                   const std::string& scorer_id,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  json manifest = json::object();
  manifest["subcommand"] = subcommand;
  manifest["config"] = config.ToJson();
  manifest["config_sha256"] = Sha256Hex(config.ToJson().dump());
  manifest["scorer_id"] = scorer_id;
  json digests = json::object();
  for (const std::string& path : inputs) {
    if (!path.empty()) digests[path] = Sha256Hex(ReadFile(path));
  }
  manifest["inputs"] = digests;
  json outs = json::object();
  for (const std::string& path : outputs) {
    outs[path] = Sha256Hex(ReadFile(path));
  }
  manifest["outputs"] = outs;
  AtomicWriteFile(outputs.front() + ".manifest.json", manifest.dump(2) + "\n");
}

// Writes to config.out, or to the report stream when no --out was given.
void Emit(const RunConfig& config, const std::string& contents,
          std::ostream& report) {
  if (config.out.empty()) {
    report << contents;
  } else {
    AtomicWriteFile(config.out, contents);
  }
}

std::vector<ScoredExample> ReadScores(const std::string& path) {
  std::ifstream in = OpenInput(path, "in");
  std::vector<ScoredExample> out;
  const auto lines = ReadLines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    try {
      out.push_back(ParseScores(lines[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), i + 1);
    }
  }
  return out;
}

// ---------------------------------------------------------------- score

void RunScore(const RunConfig& config, std::ostream& report) {
  std::ifstream in = OpenInput(config.in, "in");
  const Corpus corpus = ParseCorpus(in);
  ScorerStack stack(config);
  const std::vector<ScoredExample> scored =
      ScoreCorpus(corpus, stack.scorer(), config.Strategy(), config.jobs);
  std::string contents;
  for (const ScoredExample& s : scored) {
    contents += SerializeScores(s);
    contents.push_back('\n');
  }
  Emit(config, contents, report);

  std::vector<std::string> outputs;
  if (!config.out.empty()) outputs.push_back(config.out);
  if (!config.matrix.empty()) {
    std::string body;
    for (const CorpusExample& ex : corpus) {
      const EntailmentMatrix m = BuildMatrix(ex, stack.scorer());
      json record = {{"id", ex.id}, {"rows", m.rows()}, {"cols", m.cols()}};
      json e = json::array(), n = json::array(), c = json::array();
      for (std::size_t r = 0; r < m.rows(); ++r) {
        json er = json::array(), nr = json::array(), cr = json::array();
        for (std::size_t col = 0; col < m.cols(); ++col) {
          er.push_back(m.at(r, col).entailment);
          nr.push_back(m.at(r, col).neutral);
          cr.push_back(m.at(r, col).contradiction);
        }
        e.push_back(er);
        n.push_back(nr);
        c.push_back(cr);
      }
      record["entailment"] = e;
      record["neutral"] = n;
      record["contradiction"] = c;
      body += record.dump() + "\n";
    }
    AtomicWriteFile(config.matrix, body);
    outputs.push_back(config.matrix);
  }
  stack.PersistCache();
  if (!outputs.empty()) {
    WriteManifest("score", config, stack.Identity(), {config.in, config.cache},
                  outputs);
  }
}

// ------------------------------------------------------------ benchmark

void RunBenchmark(const RunConfig& config, std::ostream& report) {
  std::ifstream in = OpenInput(config.in, "in");
  const BenchmarkTable table = BenchmarkStrategies(ParseBenchmark(in));
  Emit(config, table.ToTsv(), report);
  if (!config.out.empty()) {
    WriteManifest("benchmark", config, "", {config.in}, {config.out});
  }
}

// ------------------------------------------------------------- annotate

void RunAnnotate(const RunConfig& config, std::ostream& report) {
  if (config.out.empty()) throw ValidationError("--out is required");
  const std::vector<ScoredExample> scored = ReadScores(config.in);
  const std::string mode = config.mode.empty() ? "threshold" : config.mode;

  if (mode == "test_faith") {
    std::ifstream sim_in = OpenInput(config.similarity, "similarity");
    std::vector<IdScore> similarity;
    for (const std::string& line : ReadLines(sim_in)) {
      if (Trim(line).empty()) continue;
      try {
        const json r = json::parse(line);
        similarity.emplace_back(r.at("id").get<std::string>(),
                                r.at("score").get<double>());
      } catch (const json::exception& e) {
        throw ParseError(std::string("malformed similarity record: ") +
                         e.what());
      }
    }
    std::vector<IdScore> faithfulness;
    for (const ScoredExample& s : scored) {
      faithfulness.emplace_back(s.id, s.aggregate);
    }
    const RemovalSet keep =
        SelectTestFaith(faithfulness, similarity, config.fraction);
    AtomicWriteFile(config.out, keep.Serialize());
    report << "retained " << keep.ids.size() << " of " << faithfulness.size()
           << " ids\n";
    WriteManifest("annotate", config, "", {config.in, config.similarity},
                  {config.out});
    return;
  }

  for (double pct : config.pct) {
    const std::string out =
        config.pct.size() > 1 ? SweepPath(config.out, pct) : config.out;
    std::string contents;
    if (mode == "threshold") {
      std::vector<SentenceScore> sentences;
      for (const ScoredExample& s : scored) {
        for (const SentenceFaithfulness& f : s.sentences) {
          sentences.push_back({s.id, f.sentence, f.score});
        }
      }
      std::size_t no = 0;
      for (const FaithfulnessAnnotation& a :
           AnnotateThreshold(sentences, pct)) {
        no += a.label == Faithful::kNo;
        contents += SerializeAnnotation(a) + "\n";
      }
      report << "pct=" << FormatNumber(pct) << " labelled " << no << " of "
             << sentences.size() << " sentences no\n";
    } else if (mode == "clean" || mode == "random") {
      RemovalSet set;
      if (mode == "clean") {
        std::vector<ExampleScores> examples;
        for (const ScoredExample& s : scored) {
          ExampleScores ex{s.id, {}};
          for (const SentenceFaithfulness& f : s.sentences) {
            ex.sentence_scores.push_back(f.score);
          }
          examples.push_back(std::move(ex));
        }
        set = CleanRemoval(examples, pct);
      } else {
        std::vector<std::string> ids;
        for (const ScoredExample& s : scored) ids.push_back(s.id);
        set = RandomRemoval(ids, pct, config.seed);
      }
      contents = set.Serialize();
      report << "pct=" << FormatNumber(pct) << " removes " << set.ids.size()
             << " of " << scored.size() << " examples\n";
    } else {
      throw ValidationError("unknown annotate mode \"" + mode +
                            "\" (expected threshold|clean|random|test_faith)");
    }
    AtomicWriteFile(out, contents);
    WriteManifest("annotate", config, "", {config.in}, {out});
  }
}

// ------------------------------------------------------------ transform

std::map<std::string, std::vector<std::optional<Faithful>>> ReadLabels(
    const std::string& path) {
  std::ifstream in = OpenInput(path, "labels");
  std::map<std::string, std::vector<std::optional<Faithful>>> out;
  const auto lines = ReadLines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    FaithfulnessAnnotation a;
    try {
      a = ParseAnnotation(lines[i]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), i + 1);
    }
    auto& labels = out[a.id];
    if (labels.size() <= a.sentence) labels.resize(a.sentence + 1);
    labels[a.sentence] = a.label;
  }
  return out;
}

void RunTransform(const RunConfig& config, std::ostream& report) {
  if (config.out.empty()) throw ValidationError("--out is required");
  std::ifstream in = OpenInput(config.in, "in");
  const Corpus corpus = ParseCorpus(in);
  const std::string& mode = config.mode;
  std::string contents;
  std::vector<std::string> inputs = {config.in};

  if (mode == "clean" || mode == "random") {
    RemovalSet removal;
    if (mode == "clean") {
      std::ifstream removal_in = OpenInput(config.removal, "removal");
      removal = RemovalSet::Parse(removal_in);
      inputs.push_back(config.removal);
    } else {
      std::vector<std::string> ids;
      for (const CorpusExample& ex : corpus) ids.push_back(ex.id);
      removal = RandomRemoval(ids, config.pct.front(), config.seed);
    }
    const Corpus kept = MakeClean(corpus, removal);
    contents = SerializeCorpus(kept);
    report << "kept " << kept.size() << " of " << corpus.size()
           << " examples\n";
  } else if (mode == "mask" || mode == "unlike") {
    const auto labels = ReadLabels(config.labels);
    inputs.push_back(config.labels);
    const auto tokenizer = MakeTokenizer(config.tokenizer);
    for (const CorpusExample& ex : corpus) {
      auto it = labels.find(ex.id);
      std::vector<Faithful> sentence_labels;
      for (std::size_t j = 0; j < ex.sum_sents.size(); ++j) {
        if (it == labels.end() || j >= it->second.size() || !it->second[j]) {
          throw ValidationError("no label for example " + ex.id +
                                " sentence " + std::to_string(j));
        }
        sentence_labels.push_back(*it->second[j]);
      }
      if (it->second.size() > ex.sum_sents.size()) {
        throw ValidationError("labels for example " + ex.id +
                              " name more sentences than it has");
      }
      const TokenizedSummary summary =
          TokenizedSummary::FromSentences(ex.sum_sents, *tokenizer);
      contents += mode == "mask"
                      ? SerializeMask(MakeMask(ex.id, summary, sentence_labels))
                      : SerializeUnlike(
                            MakeUnlike(ex.id, summary, sentence_labels));
      contents.push_back('\n');
    }
    report << "wrote " << corpus.size() << " " << mode << " records\n";
  } else {
    throw ValidationError("unknown transform mode \"" + mode +
                          "\" (expected clean|random|mask|unlike)");
  }
  AtomicWriteFile(config.out, contents);
  WriteManifest("transform", config, "", inputs, {config.out});
}

// ---------------------------------------------------------------- stats

void RunStats(const RunConfig& config, std::ostream& report) {
  std::ifstream in = OpenInput(config.in, "in");
  const Corpus corpus = ParseCorpus(in);
  if (corpus.empty()) throw ValidationError("corpus is empty");
  Emit(config, CorpusStatsTsv(corpus, *MakeTokenizer(config.tokenizer)),
       report);
  if (!config.out.empty()) {
    WriteManifest("stats", config, "", {config.in}, {config.out});
  }
}

// ------------------------------------------------------------ loss-check

LossInputs LossInstance(const RunConfig& config) {
  LossInputs in;
  in.alpha = config.alpha;
  if (!config.in.empty()) {
    json j;
    try {
      j = json::parse(ReadFile(config.in));
      const auto logits = j.at("logits").get<std::vector<std::vector<double>>>();
      in.steps = logits.size();
      in.vocab = logits.empty() ? 0 : logits.front().size();
      for (const auto& row : logits) {
        if (row.size() != in.vocab) {
          throw ValidationError("logit rows differ in length");
        }
        in.logits.insert(in.logits.end(), row.begin(), row.end());
      }
      in.targets = j.at("targets").get<std::vector<std::size_t>>();
      in.faithful = j.at("faithful").get<std::vector<int>>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed loss instance: ") + e.what());
    }
    in.Validate();
    return in;
  }
  std::mt19937_64 rng(config.seed);
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  in.steps = 4;
  in.vocab = 6;
  for (std::size_t i = 0; i < in.steps * in.vocab; ++i) {
    in.logits.push_back(4.0 * uniform() - 2.0);
  }
  for (std::size_t t = 0; t < in.steps; ++t) {
    in.targets.push_back(rng() % in.vocab);
    in.faithful.push_back(t % 2 == 0 ? 1 : 0);
  }
  return in;
}

void RunLossCheck(const RunConfig& config, std::ostream& report) {
  const LossInputs in = LossInstance(config);
  const UnlikeForm form = config.unlike_form == "literal"
                              ? UnlikeForm::kLiteral
                              : UnlikeForm::kConventional;
  struct Entry {
    const char* name;
    LossFn fn;
  };
  const Entry entries[] = {
      {"mle", MleLoss},
      {"mask", MaskLoss},
      {"unlike", [form](const LossInputs& x) { return UnlikeLoss(x, form); }},
  };
  std::ostringstream out;
  out.precision(10);
  out << "# T=" << in.steps << " V=" << in.vocab << " alpha=" << in.alpha
      << " unlike_form=" << config.unlike_form << "\n";
  out << "loss\ttotal\tmle\tunlikelihood\tgrad_check\n";
  bool all_passed = true;
  for (const Entry& e : entries) {
    const LossResult r = e.fn(in);
    const GradCheckReport g = GradCheck(e.fn, in, 1e-5, 1e-4);
    all_passed = all_passed && g.passed;
    out << e.name << '\t' << r.value.total << '\t' << r.value.mle << '\t'
        << r.value.unlikelihood << '\t' << g.ToString() << '\n';
  }
  Emit(config, out.str(), report);
  if (!all_passed) {
    throw Error(ErrorKind::kInternal, "gradient check failed");
  }
}

// ------------------------------------------------------------ xnli-pairs

void RunXnliPairs(const RunConfig& config, std::ostream& report) {
  if (config.premise_lang.empty() || config.hypothesis_lang.empty()) {
    throw ValidationError("--premise-lang and --hypothesis-lang are required");
  }
  std::ifstream in = OpenInput(config.in, "in");
  const auto rows = ParseXnliRows(in);
  const auto pairs =
      DeriveCrossPairs(rows, config.premise_lang, config.hypothesis_lang);
  std::string contents;
  for (const NliPair& p : pairs) {
    contents += json{{"premise", p.premise},
                     {"hypothesis", p.hypothesis},
                     {"gold_label", NliLabelName(p.gold_label)}}
                    .dump();
    contents.push_back('\n');
  }
  std::string scorer_id;
  if (config.evaluate) {
    ScorerStack stack(config);
    scorer_id = stack.Identity();
    std::vector<ScorePair> batch;
    for (const NliPair& p : pairs) batch.push_back({p.premise, p.hypothesis});
    std::vector<NliLabel> predicted;
    std::vector<NliLabel> gold;
    if (!batch.empty()) {
      for (const NliDistribution& d : stack.scorer().Score(batch)) {
        NliLabel label = NliLabel::kEntailment;
        if (d.neutral > d.entailment && d.neutral >= d.contradiction) {
          label = NliLabel::kNeutral;
        } else if (d.contradiction > d.entailment &&
                   d.contradiction > d.neutral) {
          label = NliLabel::kContradiction;
        }
        predicted.push_back(label);
      }
    }
    for (const NliPair& p : pairs) gold.push_back(p.gold_label);
    const double acc = Accuracy<NliLabel>(predicted, gold);
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << config.premise_lang << "->" << config.hypothesis_lang
         << "\taccuracy=" << 100.0 * acc << "\tn=" << pairs.size() << '\n';
    report << line.str();
    stack.PersistCache();
  }
  if (config.out.empty()) {
    if (!config.evaluate) report << contents;
    return;
  }
  AtomicWriteFile(config.out, contents);
  WriteManifest("xnli-pairs", config, scorer_id, {config.in}, {config.out});
}

}  // namespace

json RunConfig::ToJson() const {
  return json{{"scorer", scorer},
              {"endpoint", endpoint},
              {"seed", seed},
              {"cache", cache},
              {"strategy", strategy},
              {"k", k},
              {"min-premise", min_premise},
              {"eps", eps},
              {"neutral-stop", neutral_stop},
              {"pct", pct},
              {"fraction", fraction},
              {"alpha", alpha},
              {"unlike-form", unlike_form},
              {"tokenizer", tokenizer},
              {"jobs", jobs},
              {"in", in},
              {"out", out},
              {"mode", mode},
              {"labels", labels},
              {"removal", removal},
              {"similarity", similarity},
              {"matrix", matrix},
              {"premise-lang", premise_lang},
              {"hypothesis-lang", hypothesis_lang},
              {"evaluate", evaluate}};
}

RunConfig RunConfig::FromJson(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "scorer") c.scorer = Field<std::string>(value, k);
    else if (key == "endpoint") c.endpoint = Field<std::string>(value, k);
    else if (key == "seed") c.seed = Field<std::uint64_t>(value, k);
    else if (key == "cache") c.cache = Field<std::string>(value, k);
    else if (key == "strategy") c.strategy = Field<std::string>(value, k);
    else if (key == "k") c.k = Field<int>(value, k);
    else if (key == "min-premise") c.min_premise = Field<int>(value, k);
    else if (key == "eps") c.eps = Field<double>(value, k);
    else if (key == "neutral-stop") c.neutral_stop = Field<std::string>(value, k);
    else if (key == "pct") {
      c.pct = value.is_array() ? Field<std::vector<double>>(value, k)
                               : std::vector<double>{Field<double>(value, k)};
    }
    else if (key == "fraction") c.fraction = Field<double>(value, k);
    else if (key == "alpha") c.alpha = Field<double>(value, k);
    else if (key == "unlike-form") c.unlike_form = Field<std::string>(value, k);
    else if (key == "tokenizer") c.tokenizer = Field<std::string>(value, k);
    else if (key == "jobs") c.jobs = Field<int>(value, k);
    else if (key == "in") c.in = Field<std::string>(value, k);
    else if (key == "out") c.out = Field<std::string>(value, k);
    else if (key == "mode") c.mode = Field<std::string>(value, k);
    else if (key == "labels") c.labels = Field<std::string>(value, k);
    else if (key == "removal") c.removal = Field<std::string>(value, k);
    else if (key == "similarity") c.similarity = Field<std::string>(value, k);
    else if (key == "matrix") c.matrix = Field<std::string>(value, k);
    else if (key == "premise-lang") c.premise_lang = Field<std::string>(value, k);
    else if (key == "hypothesis-lang") {
      c.hypothesis_lang = Field<std::string>(value, k);
    }
    else if (key == "evaluate") c.evaluate = Field<bool>(value, k);
    else throw ValidationError("unknown config field \"" + key + "\"");
  }
  c.Validate();
  return c;
}

void RunConfig::Validate() const {
  if (scorer != "mock" && scorer != "cache" && scorer != "remote") {
    throw ValidationError("scorer: expected mock|cache|remote, got \"" +
                          scorer + "\"");
  }
  if (scorer == "cache" && cache.empty()) {
    throw ValidationError("cache: required when scorer is cache");
  }
  if (scorer == "remote" && endpoint.empty()) {
    throw ValidationError(
        "endpoint: required when scorer is remote (or set XFAITH_ENDPOINT)");
  }
  ParseStrategy(strategy);
  ParseNeutralStop(neutral_stop);
  if (k < 1) throw ValidationError("k: must be >= 1");
  if (min_premise < 1) throw ValidationError("min-premise: must be >= 1");
  if (std::isnan(eps)) throw ValidationError("eps: must be a number");
  if (pct.empty()) throw ValidationError("pct: at least one value required");
  for (double p : pct) {
    if (!(p >= 0.0 && p <= 100.0)) {
      throw ValidationError("pct: values must lie in [0, 100]");
    }
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("fraction: must lie in (0, 1]");
  }
  if (!(alpha >= 0.0)) throw ValidationError("alpha: must be >= 0");
  if (unlike_form != "conventional" && unlike_form != "literal") {
    throw ValidationError("unlike-form: expected conventional|literal");
  }
  MakeTokenizer(tokenizer);
  if (jobs < 1) throw ValidationError("jobs: must be >= 1");
}

StrategyOptions RunConfig::Strategy() const {
  StrategyOptions options;
  options.strategy = ParseStrategy(strategy);
  options.k = k;
  options.infuse.min_premise = min_premise;
  options.infuse.eps = eps;
  options.infuse.stop = ParseNeutralStop(neutral_stop);
  return options;
}

ScorerStack::ScorerStack(const RunConfig& config) {
  if (config.scorer == "cache") {
    cache_ = std::make_unique<ScoreCache>(ScoreCache::Load(config.cache));
    wrapper_ = std::make_unique<ReplayScorer>(*cache_);
    front_ = wrapper_.get();
    return;
  }
  if (config.scorer == "mock") {
    backend_ = std::make_unique<MockScorer>(config.seed);
  } else {
    RemoteScorerOptions options;
    options.endpoint = config.endpoint;
    options.parallelism = config.jobs;
    backend_ = std::make_unique<RemoteScorer>(options);
  }
  front_ = backend_.get();
  if (config.cache.empty()) return;
  cache_path_ = config.cache;
  writable_cache_ = true;
  if (fs::exists(cache_path_)) {
    cache_ = std::make_unique<ScoreCache>(ScoreCache::Load(cache_path_));
  } else {
    cache_ = std::make_unique<ScoreCache>(backend_->Identity());
  }
  wrapper_ = std::make_unique<CachedScorer>(*backend_, *cache_);
  front_ = wrapper_.get();
}

ScorerStack::~ScorerStack() = default;

void ScorerStack::PersistCache() const {
  if (writable_cache_) cache_->Persist(cache_path_);
}

std::vector<ScoredExample> ScoreCorpus(const Corpus& corpus, Scorer& scorer,
                                       const StrategyOptions& options,
                                       int jobs) {
  std::vector<std::optional<ScoredExample>> results(corpus.size());
  std::vector<std::exception_ptr> errors(corpus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < corpus.size();
         i = next.fetch_add(1)) {
      try {
        results[i] = ScoreExample(corpus[i], scorer, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, jobs)), corpus.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<ScoredExample> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

void RunSubcommand(std::string_view subcommand, const RunConfig& config,
                   std::ostream& report) {
  config.Validate();
  if (subcommand == "score") return RunScore(config, report);
  if (subcommand == "benchmark") return RunBenchmark(config, report);
  if (subcommand == "annotate") return RunAnnotate(config, report);
  if (subcommand == "transform") return RunTransform(config, report);
  if (subcommand == "stats") return RunStats(config, report);
  if (subcommand == "loss-check") return RunLossCheck(config, report);
  if (subcommand == "xnli-pairs") return RunXnliPairs(config, report);
  throw ValidationError("unknown subcommand \"" + std::string(subcommand) +
                        "\"");
}

}  // namespace xfaith
