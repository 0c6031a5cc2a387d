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

#include "xfaith/scorer.h"

#include <array>
#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "xfaith/error.h"
#include "xfaith/io.h"

namespace xfaith {
namespace {

using nlohmann::json;

// Three independent uniforms in [0, 1) from a SHA-256 of the inputs.
std::array<double, 4> HashUniforms(std::string_view premise,
                                   std::string_view hypothesis,
                                   std::uint64_t seed) {
  std::string material = std::to_string(seed);
  material.push_back('\0');
  material.append(premise);
  material.push_back('\0');
  material.append(hypothesis);
  const std::string hex = Sha256Hex(material);
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t bits = std::stoull(hex.substr(16 * i, 16), nullptr, 16);
    out[i] = static_cast<double>(bits >> 11) * 0x1.0p-53;
  }
  return out;
}

}  // namespace

bool NliDistribution::IsValid() const {
  for (double p : {entailment, neutral, contradiction}) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
  }
  return std::abs(entailment + neutral + contradiction - 1.0) <= kSumTolerance;
}

void NliDistribution::Validate(std::string_view context) const {
  if (IsValid()) return;
  std::ostringstream msg;
  msg.precision(17);
  if (!context.empty()) msg << context << ": ";
  msg << "invalid NLI distribution (" << entailment << ", " << neutral << ", "
      << contradiction << ")";
  throw ValidationError(msg.str());
}

std::vector<NliDistribution> Scorer::Score(const ScoreBatch& batch) {
  return Score(std::span<const ScorePair>(batch.pairs));
}

std::vector<NliDistribution> Scorer::Score(
    std::span<const ScorePair> pairs,
    const std::function<std::string(std::size_t)>& label) {
  auto name = [&](std::size_t i) {
    return label ? label(i) : "pair " + std::to_string(i);
  };
  if (pairs.empty()) throw ValidationError("score batch is empty");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].premise.empty() || pairs[i].hypothesis.empty()) {
      throw ValidationError(name(i) + " has an empty premise or hypothesis");
    }
  }
  std::vector<NliDistribution> out = DoScore(pairs);
  if (out.size() != pairs.size()) {
    throw ProtocolError("backend returned " + std::to_string(out.size()) +
                        " distributions for " + std::to_string(pairs.size()) +
                        " pairs");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].Validate(name(i));
  }
  return out;
}

NliDistribution Scorer::ScoreOne(std::string_view premise,
                                 std::string_view hypothesis) {
  const ScorePair pair{std::string(premise), std::string(hypothesis)};
  return Score(std::span<const ScorePair>(&pair, 1)).front();
}

NliDistribution MockScore(std::string_view premise,
                          std::string_view hypothesis, std::uint64_t seed,
                          bool planted) {
  const auto u = HashUniforms(premise, hypothesis, seed);
  double logits[3];
  for (int i = 0; i < 3; ++i) logits[i] = 2.0 * u[i] - 1.0;
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l);
    z += l;
  }
  NliDistribution d{logits[0] / z, logits[1] / z, logits[2] / z};
  if (planted && !hypothesis.empty() &&
      premise.find(hypothesis) != std::string_view::npos) {
    const double entail = 0.95 + 0.04 * u[3];
    const double rest = d.neutral + d.contradiction;
    d.neutral = (1.0 - entail) * d.neutral / rest;
    d.contradiction = (1.0 - entail) * d.contradiction / rest;
    d.entailment = entail;
  }
  return d;
}

std::string MockScorer::Identity() const {
  return "mock@seed=" + std::to_string(seed_) + (planted_ ? "" : ",unplanted");
}

std::vector<NliDistribution> MockScorer::DoScore(
    std::span<const ScorePair> pairs) {
  std::vector<NliDistribution> out;
  out.reserve(pairs.size());
  for (const ScorePair& p : pairs) {
    out.push_back(MockScore(p.premise, p.hypothesis, seed_, planted_));
  }
  return out;
}

ScoreCache::ScoreCache(std::string scorer_id)
    : scorer_id_(std::move(scorer_id)) {}

ScoreCache::ScoreCache(ScoreCache&& other) noexcept
    : scorer_id_(std::move(other.scorer_id_)),
      entries_(std::move(other.entries_)) {}

std::string ScoreCache::KeyFor(std::string_view scorer_id,
                               std::string_view premise,
                               std::string_view hypothesis) {
  // Length prefixes keep ("ab","c") and ("a","bc") apart.
  std::string material;
  for (std::string_view part : {scorer_id, premise, hypothesis}) {
    material += std::to_string(part.size());
    material.push_back(':');
    material.append(part);
  }
  return Sha256Hex(material);
}

std::optional<NliDistribution> ScoreCache::Lookup(
    const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::Insert(const std::string& key, const NliDistribution& dist) {
  std::unique_lock lock(mu_);
  entries_.insert_or_assign(key, dist);
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::map<std::string, NliDistribution> ScoreCache::Entries() const {
  std::shared_lock lock(mu_);
  return entries_;
}

std::string ScoreCache::Serialize() const {
  std::string out =
      json{{"version", kVersion}, {"scorer_id", scorer_id_}}.dump() + "\n";
  std::string body;
  const auto entries = Entries();
  for (const auto& [key, d] : entries) {
    body += json{{"k", key},
                 {"e", d.entailment},
                 {"n", d.neutral},
                 {"c", d.contradiction}}
                .dump();
    body.push_back('\n');
  }
  out += body;
  out += json{{"count", entries.size()}, {"sha256", Sha256Hex(body)}}.dump();
  out.push_back('\n');
  return out;
}

void ScoreCache::Persist(const std::filesystem::path& path) const {
  AtomicWriteFile(path, Serialize());
}

ScoreCache ScoreCache::Parse(std::string_view contents) {
  std::size_t offset = 0;
  auto next_line = [&](std::string_view& line) {
    if (offset >= contents.size()) return false;
    const std::size_t nl = contents.find('\n', offset);
    if (nl == std::string_view::npos) {
      // Every line the writer emits is newline-terminated.
      throw CacheError("cache truncated at byte " + std::to_string(offset),
                       offset);
    }
    line = contents.substr(offset, nl - offset);
    return true;
  };
  auto parse = [&](std::string_view line) {
    try {
      json v = json::parse(line);
      if (!v.is_object()) throw CacheError("", offset);
      return v;
    } catch (const std::exception&) {
      throw CacheError("corrupt cache line at byte " + std::to_string(offset),
                       offset);
    }
  };

  std::string_view line;
  if (!next_line(line)) throw CacheError("cache file is empty", 0);
  const json header = parse(line);
  if (!header.contains("version") || !header["version"].is_number_integer() ||
      !header.contains("scorer_id") || !header["scorer_id"].is_string()) {
    throw CacheError("cache header is malformed", 0);
  }
  if (header["version"].get<int>() != kVersion) {
    throw CacheVersionError(
        "cache version " + std::to_string(header["version"].get<int>()) +
            " is not supported (expected " + std::to_string(kVersion) + ")",
        0);
  }
  ScoreCache cache(header["scorer_id"].get<std::string>());
  offset += line.size() + 1;

  const std::size_t body_begin = offset;
  while (next_line(line)) {
    const json record = parse(line);
    if (record.contains("count")) {
      const std::string_view body =
          contents.substr(body_begin, offset - body_begin);
      if (!record["count"].is_number_unsigned() ||
          record["count"].get<std::size_t>() != cache.entries_.size() ||
          !record.contains("sha256") ||
          record["sha256"] != Sha256Hex(body)) {
        throw CacheError(
            "cache checksum mismatch at byte " + std::to_string(offset),
            offset);
      }
      if (offset + line.size() + 1 != contents.size()) {
        throw CacheError("trailing data after cache trailer at byte " +
                             std::to_string(offset + line.size() + 1),
                         offset + line.size() + 1);
      }
      return cache;
    }
    try {
      NliDistribution d{record.at("e").get<double>(),
                        record.at("n").get<double>(),
                        record.at("c").get<double>()};
      d.Validate();
      cache.entries_.insert_or_assign(record.at("k").get<std::string>(), d);
    } catch (const std::exception&) {
      throw CacheError("corrupt cache entry at byte " + std::to_string(offset),
                       offset);
    }
    offset += line.size() + 1;
  }
  throw CacheError("cache truncated: no trailer before byte " +
                       std::to_string(offset),
                   offset);
}

ScoreCache ScoreCache::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

CachedScorer::CachedScorer(Scorer& backend, ScoreCache& cache)
    : backend_(backend), cache_(cache) {
  if (cache_.scorer_id() != backend_.Identity()) {
    throw ValidationError("cache belongs to scorer \"" + cache_.scorer_id() +
                          "\", not \"" + backend_.Identity() + "\"");
  }
}

std::vector<NliDistribution> CachedScorer::DoScore(
    std::span<const ScorePair> pairs) {
  const std::string id = Identity();
  std::vector<NliDistribution> out(pairs.size());
  std::vector<std::string> keys(pairs.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    keys[i] = ScoreCache::KeyFor(id, pairs[i].premise, pairs[i].hypothesis);
    if (auto hit = cache_.Lookup(keys[i])) {
      out[i] = *hit;
      hits_.fetch_add(1);
    } else {
      missing.push_back(i);
    }
  }
  if (missing.empty()) return out;
  std::vector<ScorePair> request;
  request.reserve(missing.size());
  for (std::size_t i : missing) request.push_back(pairs[i]);
  backend_requests_.fetch_add(1);
  const std::vector<NliDistribution> fresh = backend_.Score(request);
  for (std::size_t j = 0; j < missing.size(); ++j) {
    out[missing[j]] = fresh[j];
    cache_.Insert(keys[missing[j]], fresh[j]);
  }
  return out;
}

std::vector<NliDistribution> ReplayScorer::DoScore(
    std::span<const ScorePair> pairs) {
  std::vector<NliDistribution> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto hit = cache_.Lookup(ScoreCache::KeyFor(
        cache_.scorer_id(), pairs[i].premise, pairs[i].hypothesis));
    if (!hit) {
      throw ValidationError("cache miss for pair " + std::to_string(i) +
                            " (scorer " + cache_.scorer_id() + ")");
    }
    out.push_back(*hit);
  }
  return out;
}

}  // namespace xfaith
