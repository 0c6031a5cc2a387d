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

#include <atomic>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.h"
#include "xfaith/error.h"
#include "xfaith/io.h"
#include "xfaith/remote_scorer.h"

namespace xfaith {
namespace {

using nlohmann::json;

bool Sums(const NliDistribution& d) {
  return d.entailment > 0 && d.neutral > 0 && d.contradiction > 0 &&
         std::abs(d.entailment + d.neutral + d.contradiction - 1.0) <= 1e-6;
}

TEST_CASE("distribution validity") {
  CHECK(NliDistribution{0.2, 0.3, 0.5}.IsValid());
  CHECK(NliDistribution{1.0, 0.0, 0.0}.IsValid());
  CHECK_FALSE(NliDistribution{0.2, 0.3, 0.6}.IsValid());
  CHECK_FALSE(NliDistribution{-0.1, 0.6, 0.5}.IsValid());
  CHECK_FALSE(NliDistribution{std::nan(""), 0.5, 0.5}.IsValid());
  CHECK_THROWS_AS(NliDistribution({0.5, 0.5, 0.5}).Validate("x"),
                  ValidationError);
}

TEST_CASE("mock scorer is deterministic and normalized") {
  const NliDistribution a = MockScore("premise text", "hypothesis", 7);
  const NliDistribution b = MockScore("premise text", "hypothesis", 7);
  CHECK(a == b);
  CHECK(Sums(a));
  CHECK_FALSE(MockScore("premise text", "hypothesis", 8) == a);
  CHECK_FALSE(MockScore("premise text", "other hypothesis", 7) == a);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::string p = testing::RandomSentence(rng, 0, 30, 6);
    const std::string h = testing::RandomSentence(rng, 0, 30, 3);
    const NliDistribution d = MockScore(p, h, i);
    CHECK(Sums(d));
    const NliDistribution u = MockScore(p, h, i, false);
    CHECK(Sums(u));
    CHECK(u.entailment < 0.79);
  }
}

TEST_CASE("mock scorer planted signal") {
  CHECK(MockScore("a b c d", "b c", 0).entailment > 0.9);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CHECK(MockScore("the cat sat on the mat", "cat sat", seed).entailment >
          0.9);
  }
}

TEST_CASE("score validates batches") {
  MockScorer scorer(1);
  CHECK_THROWS_AS(scorer.Score(ScoreBatch{"b", {}}), ValidationError);
  CHECK_THROWS_AS(scorer.Score(ScoreBatch{"b", {{"", "h"}}}), ValidationError);
  const auto out = scorer.Score(ScoreBatch{"b", {{"p", "h"}, {"q", "h"}}});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == MockScore("p", "h", 1));
  CHECK(out[1] == MockScore("q", "h", 1));
  CHECK(scorer.Identity() == "mock@seed=1");
  CHECK(MockScorer(1, false).Identity() != scorer.Identity());
}

TEST_CASE("invalid backend output is rejected") {
  testing::FunctionScorer bad(
      [](const std::string&, const std::string&) {
        return testing::Dist(0.7, 0.7, 0.1);
      });
  CHECK_THROWS_AS(bad.ScoreOne("p", "h"), ValidationError);
}

TEST_CASE("cache keys") {
  const std::string k = ScoreCache::KeyFor("m", "p", "h");
  CHECK(k == ScoreCache::KeyFor("m", "p", "h"));
  CHECK(k.size() == 64);
  CHECK(k != ScoreCache::KeyFor("m2", "p", "h"));
  CHECK(k != ScoreCache::KeyFor("m", "h", "p"));
  // Field boundaries are unambiguous.
  CHECK(ScoreCache::KeyFor("m", "ab", "c") != ScoreCache::KeyFor("m", "a", "bc"));
}

ScoreCache ThreeEntries() {
  ScoreCache cache("mock@seed=1");
  for (const char* h : {"x", "y", "z"}) {
    cache.Insert(ScoreCache::KeyFor("mock@seed=1", "p", h),
                 MockScore("p", h, 1));
  }
  return cache;
}

TEST_CASE("cache round trip") {
  testing::TempDir dir;
  ScoreCache empty("s");
  empty.Persist(dir / "empty.cache");
  CHECK(ScoreCache::Load(dir / "empty.cache").size() == 0);
  CHECK(ScoreCache::Load(dir / "empty.cache").scorer_id() == "s");

  const ScoreCache cache = ThreeEntries();
  cache.Persist(dir / "three.cache");
  const ScoreCache back = ScoreCache::Load(dir / "three.cache");
  CHECK(back.size() == 3);
  CHECK(back.Entries() == cache.Entries());
  CHECK(back.Serialize() == cache.Serialize());
}

TEST_CASE("cache round trip keeps doubles exactly") {
  ScoreCache cache("s");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng);
    const double b = u(rng) * (1.0 - a);
    cache.Insert(ScoreCache::KeyFor("s", "p", std::to_string(i)),
                 {a, b, 1.0 - a - b});
  }
  CHECK(ScoreCache::Parse(cache.Serialize()).Entries() == cache.Entries());
}

TEST_CASE("truncated and corrupt caches fail loudly") {
  const std::string text = ThreeEntries().Serialize();
  // Every proper prefix fails.
  for (std::size_t cut = 0; cut < text.size(); ++cut) {
    CHECK_THROWS_AS(ScoreCache::Parse(text.substr(0, cut)), CacheError);
  }
  // Corrupt the second entry line; the error names its offset.
  const std::size_t first = text.find('\n') + 1;
  const std::size_t second = text.find('\n', first) + 1;
  std::string corrupt = text;
  corrupt[second + 2] = '#';
  try {
    ScoreCache::Parse(corrupt);
    FAIL("expected CacheError");
  } catch (const CacheError& e) {
    CHECK(e.offset() == second);
    CHECK(std::string(e.what()).find(std::to_string(second)) !=
          std::string::npos);
  }
  // A valid-looking but altered probability trips the checksum.
  std::string altered = text;
  const std::size_t e_pos = altered.find("\"e\":", first);
  altered[e_pos + 6] = altered[e_pos + 6] == '1' ? '2' : '1';
  CHECK_THROWS_AS(ScoreCache::Parse(altered), CacheError);
  CHECK_THROWS_AS(ScoreCache::Parse(text + "extra\n"), CacheError);
}

TEST_CASE("cache version mismatch") {
  std::string text = ThreeEntries().Serialize();
  const std::size_t v = text.find("\"version\":1");
  REQUIRE(v != std::string::npos);
  text.replace(v, 11, "\"version\":2");
  CHECK_THROWS_AS(ScoreCache::Parse(text), CacheVersionError);
}

TEST_CASE("cached scorer skips the backend on repeat") {
  testing::FunctionScorer backend = testing::CountingMock(4);
  ScoreCache cache(backend.Identity());
  CachedScorer cached(backend, cache);
  const std::vector<ScorePair> pairs = {{"p", "h"}, {"p", "g"}};
  const auto first = cached.Score(pairs);
  CHECK(backend.calls() == 1);
  CHECK(cached.backend_requests() == 1);
  const auto second = cached.Score(pairs);
  CHECK(backend.calls() == 1);
  CHECK(cached.backend_requests() == 1);
  CHECK(cached.hits() == 2);
  CHECK(first == second);
  // Only the miss is forwarded.
  cached.Score(std::vector<ScorePair>{{"p", "h"}, {"new", "h"}});
  CHECK(backend.pairs_scored() == 3);

  ScoreCache other("other");
  CHECK_THROWS_AS(CachedScorer(backend, other), ValidationError);
}

TEST_CASE("replay scorer") {
  const ScoreCache cache = ThreeEntries();
  ReplayScorer replay(cache);
  CHECK(replay.ScoreOne("p", "y") == MockScore("p", "y", 1));
  CHECK(replay.Identity() == "mock@seed=1");
  CHECK_THROWS_AS(replay.ScoreOne("p", "w"), ValidationError);
}

TEST_CASE("cache is safe under concurrent use") {
  testing::FunctionScorer backend = testing::CountingMock(2);
  ScoreCache cache(backend.Identity());
  CachedScorer cached(backend, cache);
  std::vector<std::jthread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&cached, t] {
      for (int i = 0; i < 200; ++i) {
        const std::string h = "h" + std::to_string((i * 7 + t) % 50);
        const NliDistribution d = cached.ScoreOne("premise", h);
        if (!(d == MockScore("premise", h, 2))) std::abort();
      }
    });
  }
  threads.clear();
  CHECK(cache.size() == 50);
}

// Minimal stand-in for the inference service.
class StubServer {
 public:
  enum class Mode {
    kOk,
    kBadRequest,
    kTooLarge,
    kUnavailable,
    kFlaky,  // 503 on the first score request, then ok
    kMalformed,
    kShort,
    kInvalidDist,
    kLoading,
  };

  explicit StubServer(Mode mode, std::size_t max_batch = 1000)
      : mode_(mode), max_batch_(max_batch) {
    server_.Get("/v1/health", [this](const httplib::Request&,
                                     httplib::Response& res) {
      if (mode_ == Mode::kLoading) {
        res.status = 503;
        return;
      }
      res.set_content(R"({"status":"ok","scorer_id":"stub@1"})",
                      "application/json");
    });
    server_.Post("/v1/score", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      Handle(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }
  int score_requests() const { return requests_.load(); }
  std::size_t largest_batch() const { return largest_.load(); }

 private:
  void Handle(const httplib::Request& req, httplib::Response& res) {
    const int n = requests_.fetch_add(1);
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      res.status = 400;
      res.set_content(R"({"error":"malformed JSON"})", "application/json");
      return;
    }
    const json& pairs = body["pairs"];
    std::size_t seen = largest_.load();
    while (pairs.size() > seen &&
           !largest_.compare_exchange_weak(seen, pairs.size())) {
    }
    switch (mode_) {
      case Mode::kBadRequest:
        res.status = 400;
        res.set_content(R"({"error":"schema"})", "application/json");
        return;
      case Mode::kTooLarge:
        res.status = 413;
        return;
      case Mode::kUnavailable:
        res.status = 503;
        return;
      case Mode::kFlaky:
        if (n == 0) {
          res.status = 503;
          return;
        }
        break;
      case Mode::kMalformed:
        res.set_content("{\"results\": [", "application/json");
        return;
      default:
        break;
    }
    if (pairs.size() > max_batch_) {
      res.status = 413;
      return;
    }
    json results = json::array();
    for (const json& p : pairs) {
      // Encodes the pair so alignment can be checked by the client side.
      const NliDistribution d =
          MockScore(p["premise"].get<std::string>(),
                    p["hypothesis"].get<std::string>(), 99);
      results.push_back({{"entailment", d.entailment},
                         {"neutral", d.neutral},
                         {"contradiction", d.contradiction}});
    }
    if (mode_ == Mode::kShort) results.erase(results.end() - 1);
    if (mode_ == Mode::kInvalidDist) results[0]["neutral"] = 0.9;
    res.set_content(json{{"results", results}}.dump(), "application/json");
  }

  Mode mode_;
  std::size_t max_batch_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
  std::atomic<std::size_t> largest_{0};
};

RemoteScorerOptions Options(const StubServer& stub) {
  RemoteScorerOptions o;
  o.endpoint = stub.endpoint();
  o.timeout = std::chrono::milliseconds(2000);
  o.retries = 2;
  return o;
}

std::vector<ScorePair> Pairs(int n) {
  std::vector<ScorePair> pairs;
  for (int i = 0; i < n; ++i) {
    pairs.push_back({"premise " + std::to_string(i % 7),
                     "hypothesis " + std::to_string(i)});
  }
  return pairs;
}

TEST_CASE("remote scorer: aligned results across chunks") {
  StubServer stub(StubServer::Mode::kOk, 8);
  RemoteScorerOptions options = Options(stub);
  options.max_batch = 8;
  RemoteScorer remote(options);
  CHECK(remote.Identity() == "stub@1");
  const std::vector<ScorePair> pairs = Pairs(21);
  const auto out = remote.Score(pairs);
  REQUIRE(out.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(out[i] == MockScore(pairs[i].premise, pairs[i].hypothesis, 99));
  }
  CHECK(stub.score_requests() == 3);
  CHECK(stub.largest_batch() == 8);
}

TEST_CASE("remote scorer: concurrent callers") {
  StubServer stub(StubServer::Mode::kOk);
  RemoteScorerOptions options = Options(stub);
  options.parallelism = 2;
  options.max_batch = 4;
  RemoteScorer remote(options);
  std::atomic<int> mismatches{0};
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 6; ++t) {
      threads.emplace_back([&] {
        const auto pairs = Pairs(10);
        const auto out = remote.Score(pairs);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          if (!(out[i] ==
                MockScore(pairs[i].premise, pairs[i].hypothesis, 99))) {
            ++mismatches;
          }
        }
      });
    }
  }
  CHECK(mismatches.load() == 0);
}

TEST_CASE("remote scorer: status codes map onto error classes") {
  {
    StubServer stub(StubServer::Mode::kBadRequest);
    RemoteScorer remote(Options(stub));
    CHECK_THROWS_AS(remote.Score(Pairs(2)), ProtocolError);
    CHECK(stub.score_requests() == 1);  // not retried
  }
  {
    StubServer stub(StubServer::Mode::kTooLarge);
    RemoteScorer remote(Options(stub));
    CHECK_THROWS_AS(remote.Score(Pairs(2)), ProtocolError);
  }
  {
    StubServer stub(StubServer::Mode::kUnavailable);
    RemoteScorer remote(Options(stub));
    try {
      remote.Score(Pairs(2));
      FAIL("expected TransportError");
    } catch (const TransportError& e) {
      CHECK(e.retryable());
    }
    CHECK(stub.score_requests() == 3);  // one try plus two retries
  }
  {
    StubServer stub(StubServer::Mode::kFlaky);
    RemoteScorer remote(Options(stub));
    CHECK(remote.Score(Pairs(3)).size() == 3);
    CHECK(stub.score_requests() == 2);
  }
  {
    StubServer stub(StubServer::Mode::kLoading);
    CHECK_THROWS_AS(RemoteScorer(Options(stub)), TransportError);
  }
}

TEST_CASE("remote scorer: malformed replies") {
  {
    StubServer stub(StubServer::Mode::kMalformed);
    RemoteScorer remote(Options(stub));
    try {
      remote.Score(Pairs(2));
      FAIL("expected ProtocolError");
    } catch (const ProtocolError& e) {
      CHECK_FALSE(e.retryable());
    }
  }
  {
    StubServer stub(StubServer::Mode::kShort);
    RemoteScorer remote(Options(stub));
    CHECK_THROWS_AS(remote.Score(Pairs(4)), ProtocolError);
  }
  {
    StubServer stub(StubServer::Mode::kInvalidDist);
    RemoteScorer remote(Options(stub));
    CHECK_THROWS_AS(remote.Score(Pairs(2)), ValidationError);
  }
}

TEST_CASE("remote scorer: unreachable endpoint") {
  RemoteScorerOptions o;
  o.endpoint = "http://127.0.0.1:1";
  o.timeout = std::chrono::milliseconds(300);
  CHECK_THROWS_AS(RemoteScorer{o}, TransportError);
  o.endpoint = "ftp://example";
  CHECK_THROWS_AS(RemoteScorer{o}, ValidationError);
}

TEST_CASE("remote scorer behind a cache") {
  StubServer stub(StubServer::Mode::kOk);
  RemoteScorer remote(Options(stub));
  ScoreCache cache(remote.Identity());
  CachedScorer cached(remote, cache);
  cached.Score(Pairs(5));
  cached.Score(Pairs(5));
  CHECK(stub.score_requests() == 1);
}

}  // namespace
}  // namespace xfaith
