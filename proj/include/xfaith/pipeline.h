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

#ifndef XFAITH_PIPELINE_H_
#define XFAITH_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "xfaith/aggregate.h"
#include "xfaith/corpus.h"
#include "xfaith/scorer.h"

namespace xfaith {

// Everything a subcommand may read. Keys in config files and flag names are
// the same dashed spellings (e.g. "min-premise").
struct RunConfig {
  std::string scorer = "mock";  // mock | cache | remote
  std::string endpoint;
  std::uint64_t seed = 0;
  std::string cache;            // cache file; required for scorer=cache
  std::string strategy = "infuse";
  int k = 5;
  int min_premise = 5;
  double eps = 0.0;
  std::string neutral_stop = "decreasing";
  std::vector<double> pct = {10.0};
  double fraction = 0.10;
  double alpha = 1.0;
  std::string unlike_form = "conventional";  // conventional | literal
  std::string tokenizer = "default";
  int jobs = 1;
  std::string in;
  std::string out;
  std::string mode;
  std::string labels;
  std::string removal;
  std::string similarity;
  std::string matrix;
  std::string premise_lang;
  std::string hypothesis_lang;
  bool evaluate = false;

  nlohmann::json ToJson() const;
  // Starts from defaults; throws ValidationError naming the field on unknown
  // keys, wrong types or out-of-range values.
  static RunConfig FromJson(const nlohmann::json& j);
  void Validate() const;
  StrategyOptions Strategy() const;
};

// Owns a scorer together with the cache in front of it, if any.
class ScorerStack {
 public:
  explicit ScorerStack(const RunConfig& config);
  ~ScorerStack();

  Scorer& scorer() { return *front_; }
  std::string Identity() const { return front_->Identity(); }
  // Writes the cache back when it is a read-through cache.
  void PersistCache() const;

 private:
  std::unique_ptr<Scorer> backend_;
  std::unique_ptr<ScoreCache> cache_;
  std::unique_ptr<Scorer> wrapper_;  // cache replay or read-through
  Scorer* front_ = nullptr;
  std::string cache_path_;
  bool writable_cache_ = false;
};

// Scores every example on up to `jobs` threads. Output order follows the
// corpus; when several examples fail, the error of the earliest is thrown.
std::vector<ScoredExample> ScoreCorpus(const Corpus& corpus, Scorer& scorer,
                                       const StrategyOptions& options,
                                       int jobs);

// Runs one subcommand (score, benchmark, annotate, transform, stats,
// loss-check, xnli-pairs). Text reports go to `report`; files are written
// atomically and each primary output gets a "<out>.manifest.json" beside it.
void RunSubcommand(std::string_view subcommand, const RunConfig& config,
                   std::ostream& report);

}  // namespace xfaith

#endif  // XFAITH_PIPELINE_H_
