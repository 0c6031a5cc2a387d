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

#include "xfaith/annotate.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "xfaith/error.h"
#include "xfaith/io.h"
#include "xfaith/textmetrics.h"
#include "xfaith/unicode.h"

namespace xfaith {
namespace {

using nlohmann::json;

// floor(fraction * n). The slack absorbs products such as 0.29 * 100 that
// land a hair under an integer.
std::size_t CountFor(double fraction, std::size_t n) {
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 1e-9));
}

void CheckPct(double pct) {
  if (!(pct >= 0.0 && pct <= 100.0)) {
    throw ValidationError("pct must be within [0, 100]");
  }
}

// Indices of the `count` smallest values, ties to the lower index.
std::vector<std::size_t> LowestIndices(const std::vector<double>& values,
                                       std::size_t count) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  order.resize(count);
  return order;
}

std::vector<double> MinMaxNormalize(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::vector<double> out(values.size(), 0.0);
  if (*hi == *lo) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - *lo) / (*hi - *lo);
  }
  return out;
}

}  // namespace

std::string_view FaithfulName(Faithful f) {
  return f == Faithful::kYes ? "yes" : "no";
}

Faithful ParseFaithful(std::string_view name) {
  if (name == "yes") return Faithful::kYes;
  if (name == "no") return Faithful::kNo;
  throw ValidationError("unknown faithfulness label \"" + std::string(name) +
                        "\" (expected yes|no)");
}

std::vector<FaithfulnessAnnotation> AnnotateThreshold(
    const std::vector<SentenceScore>& scores, double pct) {
  CheckPct(pct);
  if (scores.empty()) throw ValidationError("no sentence scores to annotate");
  std::vector<double> values;
  values.reserve(scores.size());
  for (const SentenceScore& s : scores) values.push_back(s.score);

  std::vector<FaithfulnessAnnotation> out;
  out.reserve(scores.size());
  for (const SentenceScore& s : scores) {
    out.push_back({s.id, s.sentence, s.score, Faithful::kYes});
  }
  for (std::size_t i : LowestIndices(values, CountFor(pct / 100.0, values.size()))) {
    out[i].label = Faithful::kNo;
  }
  return out;
}

std::string RemovalSet::Serialize() const {
  std::ostringstream out;
  out << "# rule=" << rule << " fraction=" << fraction << '\n';
  for (const std::string& id : ids) out << id << '\n';
  return out.str();
}

RemovalSet RemovalSet::Parse(std::istream& in) {
  RemovalSet set;
  for (const std::string& raw : ReadLines(in)) {
    const std::string line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string field;
      while (header >> field) {
        if (field.starts_with("rule=")) set.rule = field.substr(5);
        if (field.starts_with("fraction=")) {
          try {
            set.fraction = std::stod(field.substr(9));
          } catch (const std::exception&) {
            throw ParseError("bad fraction in removal-set header");
          }
        }
      }
      continue;
    }
    set.ids.push_back(line);
  }
  return set;
}

RemovalSet CleanRemoval(const std::vector<ExampleScores>& examples,
                        double pct) {
  CheckPct(pct);
  std::vector<double> means;
  means.reserve(examples.size());
  for (const ExampleScores& ex : examples) {
    if (ex.sentence_scores.empty()) {
      throw ValidationError("example " + ex.id + " has no sentence scores");
    }
    means.push_back(
        std::accumulate(ex.sentence_scores.begin(), ex.sentence_scores.end(),
                        0.0) /
        static_cast<double>(ex.sentence_scores.size()));
  }
  auto lowest = LowestIndices(means, CountFor(pct / 100.0, means.size()));
  std::sort(lowest.begin(), lowest.end());
  RemovalSet set{"clean", pct / 100.0, {}};
  for (std::size_t i : lowest) set.ids.push_back(examples[i].id);
  return set;
}

RemovalSet RandomRemoval(const std::vector<std::string>& ids, double pct,
                         std::uint64_t seed) {
  CheckPct(pct);
  const std::size_t count = CountFor(pct / 100.0, ids.size());
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates; modulo keeps the draw identical across standard
  // libraries, unlike std::uniform_int_distribution.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (ids.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  std::sort(order.begin(), order.end());
  RemovalSet set{"random", pct / 100.0, {}};
  for (std::size_t i : order) set.ids.push_back(ids[i]);
  return set;
}

RemovalSet SelectTestFaith(const std::vector<IdScore>& faithfulness,
                           const std::vector<IdScore>& similarity,
                           double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("fraction must be within (0, 1]");
  }
  if (faithfulness.size() != similarity.size()) {
    throw ValidationError("faithfulness and similarity streams differ in size");
  }
  std::unordered_map<std::string, double> sim_by_id;
  for (const auto& [id, s] : similarity) {
    if (!sim_by_id.emplace(id, s).second) {
      throw ValidationError("duplicate id \"" + id + "\" in similarity stream");
    }
  }
  std::vector<double> faith_values;
  std::vector<double> sim_values;
  std::unordered_set<std::string> seen;
  for (const auto& [id, f] : faithfulness) {
    auto it = sim_by_id.find(id);
    if (it == sim_by_id.end()) {
      throw ValidationError("id \"" + id + "\" has no similarity score");
    }
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate id \"" + id +
                            "\" in faithfulness stream");
    }
    faith_values.push_back(f);
    sim_values.push_back(it->second);
  }
  if (faith_values.empty()) throw ValidationError("no ids to select from");

  const auto faith = MinMaxNormalize(faith_values);
  const auto sim = MinMaxNormalize(sim_values);
  std::vector<double> negated(faith.size());
  for (std::size_t i = 0; i < faith.size(); ++i) {
    negated[i] = -(faith[i] + sim[i]) / 2.0;
  }
  // Highest combined score first == lowest negated score first.
  auto top = LowestIndices(negated, CountFor(fraction, negated.size()));
  RemovalSet set{"test_faith", fraction, {}};
  for (std::size_t i : top) set.ids.push_back(faithfulness[i].first);
  return set;
}

double LexicalSimilarity::Similarity(std::string_view a,
                                     std::string_view b) const {
  const DefaultTokenizer tokenizer;
  std::map<std::string, double> ca;
  std::map<std::string, double> cb;
  for (auto& t : tokenizer.Tokenize(a)) ca[t] += 1.0;
  for (auto& t : tokenizer.Tokenize(b)) cb[t] += 1.0;
  if (ca.empty() || cb.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [t, v] : ca) {
    na += v * v;
    if (auto it = cb.find(t); it != cb.end()) dot += v * it->second;
  }
  for (const auto& [t, v] : cb) nb += v * v;
  return dot / std::sqrt(na * nb);
}

std::string SerializeAnnotation(const FaithfulnessAnnotation& a) {
  json record = json::object();
  record["id"] = a.id;
  record["sent_idx"] = a.sentence;
  record["score"] = a.score;
  record["label"] = FaithfulName(a.label);
  return record.dump();
}

FaithfulnessAnnotation ParseAnnotation(std::string_view line) {
  try {
    const json r = json::parse(line);
    return {r.at("id").get<std::string>(), r.at("sent_idx").get<std::size_t>(),
            r.at("score").get<double>(),
            ParseFaithful(r.at("label").get<std::string>())};
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed annotation: ") + e.what());
  }
}

}  // namespace xfaith
