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

// xfaith: faithfulness scoring, benchmarking and dataset preparation for
// cross-lingual summarisation corpora.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xfaith/error.h"
#include "xfaith/io.h"
#include "xfaith/pipeline.h"

namespace {

using nlohmann::json;

// Flag values land here; only flags the user actually passed are merged over
// the config file.
struct Flags {
  std::string config;
  std::string scorer, endpoint, cache, strategy, neutral_stop, tokenizer, in,
      out, mode, labels, removal, similarity, matrix, premise_lang,
      hypothesis_lang, unlike_form;
  std::uint64_t seed = 0;
  int k = 0, min_premise = 0, jobs = 0;
  double eps = 0, fraction = 0, alpha = 0;
  std::vector<double> pct;
  bool evaluate = false;
};

void AddFlags(CLI::App* cmd, Flags& f, std::vector<CLI::Option*>& opts) {
  auto add = [&](const char* name, auto& target, const char* help) {
    opts.push_back(cmd->add_option(name, target, help));
  };
  cmd->add_option("--config", f.config, "JSON config file; flags override it");
  add("--scorer", f.scorer, "mock | cache | remote");
  add("--endpoint", f.endpoint, "remote scorer URL (default $XFAITH_ENDPOINT)");
  add("--seed", f.seed, "seed for the mock scorer and random draws");
  add("--cache", f.cache, "score cache file");
  add("--strategy", f.strategy,
      "fulldoc | summac_zs | sentli | infuse | one_to_one");
  add("--k", f.k, "SeNtLI top-k");
  add("--min-premise", f.min_premise, "InFusE minimum premise size");
  add("--eps", f.eps, "InFusE neutral tolerance");
  add("--neutral-stop", f.neutral_stop, "decreasing | increasing");
  opts.push_back(
      cmd->add_option("--pct", f.pct, "percentile threshold(s); repeatable")
          ->take_all());
  add("--fraction", f.fraction, "Test_Faith retain fraction");
  add("--alpha", f.alpha, "unlikelihood weight");
  add("--unlike-form", f.unlike_form, "conventional | literal");
  add("--tokenizer", f.tokenizer, "default | whitespace");
  add("--jobs", f.jobs, "parallelism limit");
  add("--in", f.in, "input file");
  add("--out", f.out, "output file");
  add("--mode", f.mode, "subcommand mode");
  add("--labels", f.labels, "annotations JSONL");
  add("--removal", f.removal, "removal set file");
  add("--similarity", f.similarity, "similarity JSONL for Test_Faith");
  add("--matrix", f.matrix, "also write entailment matrices here");
  add("--premise-lang", f.premise_lang, "premise language");
  add("--hypothesis-lang", f.hypothesis_lang, "hypothesis language");
  opts.push_back(
      cmd->add_flag("--evaluate", f.evaluate, "score pairs and report accuracy"));
}

json MergedConfig(const Flags& f, const std::vector<CLI::Option*>& opts) {
  json merged = json::object();
  if (const char* env = std::getenv("XFAITH_ENDPOINT"); env && *env) {
    merged["endpoint"] = env;
  }
  if (!f.config.empty()) {
    json file;
    try {
      file = json::parse(xfaith::ReadFile(f.config));
    } catch (const json::parse_error& e) {
      throw xfaith::ValidationError("config file " + f.config + ": " +
                                    e.what());
    }
    if (!file.is_object()) {
      throw xfaith::ValidationError("config file must hold a JSON object");
    }
    merged.update(file);
  }
  for (const CLI::Option* opt : opts) {
    if (opt->count() == 0) continue;
    const std::string key = opt->get_name().substr(2);  // strip "--"
    if (key == "scorer") merged[key] = f.scorer;
    else if (key == "endpoint") merged[key] = f.endpoint;
    else if (key == "seed") merged[key] = f.seed;
    else if (key == "cache") merged[key] = f.cache;
    else if (key == "strategy") merged[key] = f.strategy;
    else if (key == "k") merged[key] = f.k;
    else if (key == "min-premise") merged[key] = f.min_premise;
    else if (key == "eps") merged[key] = f.eps;
    else if (key == "neutral-stop") merged[key] = f.neutral_stop;
    else if (key == "pct") merged[key] = f.pct;
    else if (key == "fraction") merged[key] = f.fraction;
    else if (key == "alpha") merged[key] = f.alpha;
    else if (key == "unlike-form") merged[key] = f.unlike_form;
    else if (key == "tokenizer") merged[key] = f.tokenizer;
    else if (key == "jobs") merged[key] = f.jobs;
    else if (key == "in") merged[key] = f.in;
    else if (key == "out") merged[key] = f.out;
    else if (key == "mode") merged[key] = f.mode;
    else if (key == "labels") merged[key] = f.labels;
    else if (key == "removal") merged[key] = f.removal;
    else if (key == "similarity") merged[key] = f.similarity;
    else if (key == "matrix") merged[key] = f.matrix;
    else if (key == "premise-lang") merged[key] = f.premise_lang;
    else if (key == "hypothesis-lang") merged[key] = f.hypothesis_lang;
    else if (key == "evaluate") merged[key] = f.evaluate;
  }
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faithfulness evaluation and dataset curation for "
               "cross-lingual summarisation"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<CLI::Option*> opts;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"score", "score summary sentences against their documents"},
      {"benchmark", "ROC-AUC / kappa table against human judgements"},
      {"annotate", "faithfulness labels, removal sets and Test_Faith"},
      {"transform", "Clean / Mask / Unlike training datasets"},
      {"stats", "extractiveness statistics"},
      {"loss-check", "loss values and gradient check"},
      {"xnli-pairs", "derive cross-lingual NLI pairs"},
  };
  for (const auto& [name, help] : commands) {
    AddFlags(app.add_subcommand(name, help), flags, opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    const xfaith::RunConfig config =
        xfaith::RunConfig::FromJson(MergedConfig(flags, opts));
    xfaith::RunSubcommand(subcommand, config, std::cout);
  } catch (const xfaith::Error& e) {
    std::cerr << "xfaith " << subcommand << ": " << e.what() << '\n';
    return xfaith::ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "xfaith " << subcommand << ": internal error: " << e.what()
              << '\n';
    return 3;
  }
  return 0;
}
