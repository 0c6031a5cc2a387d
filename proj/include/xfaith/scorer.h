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

#ifndef XFAITH_SCORER_H_
#define XFAITH_SCORER_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xfaith {

// Three-way NLI probabilities for one premise/hypothesis pair.
struct NliDistribution {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;

  static constexpr double kSumTolerance = 1e-6;

  bool IsValid() const;
  // Throws ValidationError (prefixed with context) when !IsValid().
  void Validate(std::string_view context = {}) const;

  bool operator==(const NliDistribution&) const = default;
};

struct ScorePair {
  std::string premise;
  std::string hypothesis;
};

struct ScoreBatch {
  std::string id;
  std::vector<ScorePair> pairs;
};

// An entailment backend. Implementations must tolerate concurrent calls.
class Scorer {
 public:
  virtual ~Scorer() = default;

  // Scores every pair of a non-empty batch. The result is positionally
  // aligned with batch.pairs and every distribution has been validated.
  std::vector<NliDistribution> Score(const ScoreBatch& batch);
  // label(i) names pair i in error messages.
  std::vector<NliDistribution> Score(
      std::span<const ScorePair> pairs,
      const std::function<std::string(std::size_t)>& label = {});
  NliDistribution ScoreOne(std::string_view premise,
                           std::string_view hypothesis);

  // Names the model and revision; part of every cache key.
  virtual std::string Identity() const = 0;

 protected:
  virtual std::vector<NliDistribution> DoScore(
      std::span<const ScorePair> pairs) = 0;
};

// Deterministic hash-driven stand-in for a real NLI model. Logits are drawn
// from [-1, 1] so an unplanted entailment never exceeds e/(e + 2/e) < 0.79.
// With planting on, a hypothesis that occurs verbatim in the premise gets
// entailment in [0.95, 0.99).
NliDistribution MockScore(std::string_view premise,
                          std::string_view hypothesis, std::uint64_t seed,
                          bool planted = true);

class MockScorer : public Scorer {
 public:
  explicit MockScorer(std::uint64_t seed, bool planted = true)
      : seed_(seed), planted_(planted) {}

  std::string Identity() const override;

 protected:
  std::vector<NliDistribution> DoScore(
      std::span<const ScorePair> pairs) override;

 private:
  std::uint64_t seed_;
  bool planted_;
};

// Score store keyed by a content hash of (scorer id, premise, hypothesis).
// Lookups take a shared lock; inserts are serialized.
class ScoreCache {
 public:
  static constexpr int kVersion = 1;

  explicit ScoreCache(std::string scorer_id);
  ScoreCache(ScoreCache&& other) noexcept;
  ScoreCache& operator=(ScoreCache&&) = delete;

  static std::string KeyFor(std::string_view scorer_id,
                            std::string_view premise,
                            std::string_view hypothesis);

  const std::string& scorer_id() const { return scorer_id_; }
  std::optional<NliDistribution> Lookup(const std::string& key) const;
  void Insert(const std::string& key, const NliDistribution& dist);
  std::size_t size() const;
  std::map<std::string, NliDistribution> Entries() const;

  // File layout: a header line {"version":1,"scorer_id":...}, one
  // {"k","e","n","c"} line per entry in key order, then a trailer
  // {"count":N,"sha256":...} over the entry lines.
  std::string Serialize() const;
  void Persist(const std::filesystem::path& path) const;
  static ScoreCache Parse(std::string_view contents);
  static ScoreCache Load(const std::filesystem::path& path);

 private:
  std::string scorer_id_;
  mutable std::shared_mutex mu_;
  std::map<std::string, NliDistribution> entries_;
};

// Read-through cache in front of another backend.
class CachedScorer : public Scorer {
 public:
  // cache.scorer_id() must equal backend.Identity().
  CachedScorer(Scorer& backend, ScoreCache& cache);

  std::string Identity() const override { return backend_.Identity(); }
  std::size_t backend_requests() const { return backend_requests_.load(); }
  std::size_t hits() const { return hits_.load(); }

 protected:
  std::vector<NliDistribution> DoScore(
      std::span<const ScorePair> pairs) override;

 private:
  Scorer& backend_;
  ScoreCache& cache_;
  std::atomic<std::size_t> backend_requests_{0};
  std::atomic<std::size_t> hits_{0};
};

// Answers only from a cache; a miss is a ValidationError.
class ReplayScorer : public Scorer {
 public:
  explicit ReplayScorer(const ScoreCache& cache) : cache_(cache) {}

  std::string Identity() const override { return cache_.scorer_id(); }

 protected:
  std::vector<NliDistribution> DoScore(
      std::span<const ScorePair> pairs) override;

 private:
  const ScoreCache& cache_;
};

}  // namespace xfaith

#endif  // XFAITH_SCORER_H_
