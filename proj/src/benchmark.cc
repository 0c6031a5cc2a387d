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

#include "xfaith/benchmark.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xfaith/io.h"
#include "xfaith/unicode.h"

namespace xfaith {
namespace {

using nlohmann::json;

std::string FormatPercent(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << 100.0 * v;
  return out.str();
}

}  // namespace

Judgement ParseJudgement(std::string_view name) {
  if (name == "no") return Judgement::kNo;
  if (name == "partial") return Judgement::kPartial;
  if (name == "yes") return Judgement::kYes;
  throw ValidationError("unknown judgement \"" + std::string(name) +
                        "\" (expected yes|partial|no)");
}

std::string_view JudgementName(Judgement j) {
  switch (j) {
    case Judgement::kNo:
      return "no";
    case Judgement::kPartial:
      return "partial";
    case Judgement::kYes:
      return "yes";
  }
  return "?";
}

GoldLabel AggregateJudgements(std::span<const Judgement> judgements) {
  if (judgements.size() != 3) {
    throw ValidationError("expected exactly 3 judgements, got " +
                          std::to_string(judgements.size()));
  }
  int sum = 0;
  for (Judgement j : judgements) sum += static_cast<int>(j);
  return sum <= 2 ? GoldLabel::kNotEntail : GoldLabel::kEntail;
}

double RocAuc(std::span<const double> scores,
              std::span<const GoldLabel> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("roc_auc: " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(labels.size()) +
                          " labels");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw ValidationError("roc_auc: NaN score");
  }
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (GoldLabel l : labels) positives += l == GoldLabel::kEntail;
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("roc_auc needs both entail and not_entail items");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of 1-based midranks of the positives, doubled to stay integral.
  std::size_t rank_sum_x2 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    std::size_t pos_in_group = 0;
    for (std::size_t t = i; t < j; ++t) {
      pos_in_group += labels[order[t]] == GoldLabel::kEntail;
    }
    // Ranks i+1 .. j share the midrank (i + 1 + j) / 2.
    rank_sum_x2 += pos_in_group * (i + 1 + j);
    i = j;
  }
  const double u = static_cast<double>(rank_sum_x2) / 2.0 -
                   static_cast<double>(positives * (positives + 1)) / 2.0;
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

double FleissKappa(const std::vector<std::vector<int>>& counts) {
  if (counts.empty()) throw ValidationError("fleiss_kappa: no items");
  const std::size_t categories = counts.front().size();
  if (categories < 2) {
    throw ValidationError("fleiss_kappa: need at least two categories");
  }
  int raters = -1;
  std::vector<double> totals(categories, 0.0);
  double p_bar = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (row.size() != categories) {
      throw ValidationError("fleiss_kappa: item " + std::to_string(i) +
                            " has the wrong number of categories");
    }
    int n = 0;
    double squares = 0.0;
    for (std::size_t c = 0; c < categories; ++c) {
      if (row[c] < 0) {
        throw ValidationError("fleiss_kappa: negative count in item " +
                              std::to_string(i));
      }
      n += row[c];
      squares += static_cast<double>(row[c]) * row[c];
      totals[c] += row[c];
    }
    if (raters < 0) raters = n;
    if (n != raters) {
      throw ValidationError("fleiss_kappa: item " + std::to_string(i) +
                            " has " + std::to_string(n) + " ratings, expected " +
                            std::to_string(raters));
    }
    if (n < 2) throw ValidationError("fleiss_kappa: need at least 2 raters");
    p_bar += (squares - n) / (static_cast<double>(n) * (n - 1));
  }
  const double items = static_cast<double>(counts.size());
  p_bar /= items;
  double p_e = 0.0;
  for (double t : totals) {
    const double p = t / (items * raters);
    p_e += p * p;
  }
  if (p_e >= 1.0) {
    throw UndefinedMetricError(
        "fleiss_kappa undefined: every rating falls in one category");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

double FleissKappaYesNo(const std::vector<std::array<Judgement, 3>>& items) {
  std::vector<std::vector<int>> counts;
  counts.reserve(items.size());
  for (const auto& item : items) {
    int yes = 0;
    for (Judgement j : item) yes += j != Judgement::kNo;
    counts.push_back({yes, 3 - yes});
  }
  return FleissKappa(counts);
}

std::vector<BenchmarkRecord> ParseBenchmark(std::istream& in) {
  std::vector<BenchmarkRecord> records;
  const std::vector<std::string> lines = ReadLines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    if (Trim(lines[i]).empty()) continue;
    try {
      const json r = json::parse(lines[i]);
      BenchmarkRecord rec;
      rec.id = r.at("id").get<std::string>();
      rec.sentence = r.at("sent_idx").get<std::size_t>();
      if (auto it = r.find("lang_pair"); it != r.end()) {
        rec.lang_pair = it->get<std::string>();
      }
      const auto js = r.at("judgements").get<std::vector<std::string>>();
      if (js.size() != 3) {
        throw ValidationError("expected 3 judgements, got " +
                              std::to_string(js.size()));
      }
      for (std::size_t k = 0; k < 3; ++k) {
        rec.judgements[k] = ParseJudgement(js[k]);
      }
      rec.gold = AggregateJudgements(rec.judgements);
      for (const auto& [name, value] : r.at("scores").items()) {
        const double v = value.get<double>();
        if (!(v >= 0.0 && v <= 1.0)) {
          throw ValidationError("score for " + name + " is outside [0, 1]");
        }
        rec.scores[name] = v;
      }
      records.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed benchmark record: ") + e.what(),
                       line);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return records;
}

BenchmarkTable BenchmarkStrategies(
    const std::vector<BenchmarkRecord>& records) {
  BenchmarkTable table;
  std::set<std::string> pairs;
  std::set<std::string> strategies;
  for (const BenchmarkRecord& r : records) {
    pairs.insert(r.lang_pair);
    for (const auto& [name, _] : r.scores) strategies.insert(name);
  }
  table.lang_pairs.assign(pairs.begin(), pairs.end());
  table.strategies.assign(strategies.begin(), strategies.end());
  table.total = records.size();

  for (const std::string& pair : table.lang_pairs) {
    std::vector<std::array<Judgement, 3>> judgements;
    std::size_t not_entail = 0;
    for (const BenchmarkRecord& r : records) {
      if (r.lang_pair != pair) continue;
      judgements.push_back(r.judgements);
      not_entail += r.gold == GoldLabel::kNotEntail;
    }
    table.n_by_pair[pair] = judgements.size();
    table.not_entail_by_pair[pair] =
        static_cast<double>(not_entail) / static_cast<double>(judgements.size());
    try {
      table.kappa_by_pair[pair] = FleissKappaYesNo(judgements);
    } catch (const UndefinedMetricError&) {
      table.kappa_by_pair[pair] = std::nullopt;
    }

    for (const std::string& strategy : table.strategies) {
      std::vector<double> scores;
      std::vector<GoldLabel> labels;
      for (const BenchmarkRecord& r : records) {
        if (r.lang_pair != pair) continue;
        auto it = r.scores.find(strategy);
        if (it == r.scores.end()) continue;
        scores.push_back(it->second);
        labels.push_back(r.gold);
      }
      BenchmarkCell cell;
      cell.n = scores.size();
      try {
        if (!scores.empty()) cell.auc = RocAuc(scores, labels);
      } catch (const UndefinedMetricError&) {
        cell.auc = std::nullopt;
      }
      table.cells[{strategy, pair}] = cell;
    }
  }
  return table;
}

std::string BenchmarkTable::ToTsv() const {
  std::ostringstream out;
  out << "Models";
  for (const std::string& pair : lang_pairs) out << '\t' << pair;
  out << "\tAVG\n";
  for (const std::string& strategy : strategies) {
    out << strategy;
    double sum = 0.0;
    int defined = 0;
    for (const std::string& pair : lang_pairs) {
      auto it = cells.find({strategy, pair});
      if (it == cells.end() || !it->second.auc) {
        out << "\tn/a";
        continue;
      }
      out << '\t' << FormatPercent(*it->second.auc);
      sum += *it->second.auc;
      ++defined;
    }
    out << '\t' << (defined > 0 ? FormatPercent(sum / defined) : "n/a") << '\n';
  }
  out << "n";
  for (const std::string& pair : lang_pairs) out << '\t' << n_by_pair.at(pair);
  out << '\t' << total << '\n';
  out << "% not-entail";
  for (const std::string& pair : lang_pairs) {
    out << '\t' << FormatPercent(not_entail_by_pair.at(pair));
  }
  out << "\t-\n";
  out << "Fleiss's Kappa";
  for (const std::string& pair : lang_pairs) {
    const auto& k = kappa_by_pair.at(pair);
    if (k) {
      std::ostringstream v;
      v.setf(std::ios::fixed);
      v.precision(2);
      v << *k;
      out << '\t' << v.str();
    } else {
      out << "\tn/a";
    }
  }
  out << "\t-\n";
  out << "# n=" << total << '\n';
  return out.str();
}

}  // namespace xfaith
