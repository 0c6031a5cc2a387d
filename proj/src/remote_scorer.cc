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

#include "xfaith/remote_scorer.h"

#include <regex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "xfaith/error.h"

namespace xfaith {
namespace {

using nlohmann::json;

httplib::Client MakeClient(const std::string& host, int port,
                           std::chrono::milliseconds timeout) {
  httplib::Client client(host, port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~InFlightSlot() { sem_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

json ParseBody(const std::string& body, const char* what) {
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    throw ProtocolError(std::string("malformed JSON in ") + what);
  }
}

}  // namespace

RemoteScorer::RemoteScorer(RemoteScorerOptions options)
    : options_(std::move(options)),
      in_flight_(std::max(1, options_.parallelism)) {
  static const std::regex kEndpoint(R"(^http://([^/:]+)(?::(\d+))?/?$)");
  std::smatch m;
  if (!std::regex_match(options_.endpoint, m, kEndpoint)) {
    throw ValidationError("endpoint must look like http://host[:port], got \"" +
                          options_.endpoint + "\"");
  }
  host_ = m[1].str();
  if (m[2].matched) port_ = std::stoi(m[2].str());
  if (options_.max_batch == 0) throw ValidationError("max_batch must be > 0");

  auto client = MakeClient(host_, port_, options_.timeout);
  auto res = client.Get("/v1/health");
  if (!res) {
    throw TransportError("cannot reach " + options_.endpoint + ": " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 503) {
    throw TransportError("scorer at " + options_.endpoint + " is loading");
  }
  if (res->status != 200) {
    throw ProtocolError("health check returned HTTP " +
                        std::to_string(res->status));
  }
  const json health = ParseBody(res->body, "health response");
  if (!health.is_object() || !health.contains("scorer_id") ||
      !health["scorer_id"].is_string() ||
      health["scorer_id"].get<std::string>().empty()) {
    throw ProtocolError("health response lacks scorer_id");
  }
  scorer_id_ = health["scorer_id"].get<std::string>();
}

RemoteScorer::~RemoteScorer() = default;

std::vector<NliDistribution> RemoteScorer::DoScore(
    std::span<const ScorePair> pairs) {
  std::vector<NliDistribution> out;
  out.reserve(pairs.size());
  for (std::size_t begin = 0; begin < pairs.size();
       begin += options_.max_batch) {
    const std::size_t n = std::min(options_.max_batch, pairs.size() - begin);
    auto chunk = PostChunk(pairs.subspan(begin, n));
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  return out;
}

std::vector<NliDistribution> RemoteScorer::PostChunk(
    std::span<const ScorePair> pairs) {
  json request = {{"pairs", json::array()}};
  for (const ScorePair& p : pairs) {
    request["pairs"].push_back(
        {{"premise", p.premise}, {"hypothesis", p.hypothesis}});
  }
  const std::string body = request.dump();

  for (int attempt = 0;; ++attempt) {
    try {
      httplib::Result res = [&] {
        InFlightSlot slot(in_flight_);
        auto client = MakeClient(host_, port_, options_.timeout);
        return client.Post("/v1/score", body, "application/json");
      }();

      if (!res) {
        throw TransportError("POST /v1/score failed: " +
                             httplib::to_string(res.error()));
      }
      if (res->status == 503) {
        throw TransportError("scorer unavailable (HTTP 503)");
      }
      if (res->status != 200) {
        throw ProtocolError("POST /v1/score returned HTTP " +
                            std::to_string(res->status) + ": " + res->body);
      }
      const json reply = ParseBody(res->body, "score response");
      if (!reply.is_object() || !reply.contains("results") ||
          !reply["results"].is_array()) {
        throw ProtocolError("score response lacks a results array");
      }
      const json& results = reply["results"];
      if (results.size() != pairs.size()) {
        throw ProtocolError("score response has " +
                            std::to_string(results.size()) + " results for " +
                            std::to_string(pairs.size()) + " pairs");
      }
      std::vector<NliDistribution> out;
      out.reserve(results.size());
      for (std::size_t i = 0; i < results.size(); ++i) {
        const json& r = results[i];
        if (!r.is_object()) {
          throw ProtocolError("result " + std::to_string(i) +
                              " is not an object");
        }
        NliDistribution d;
        try {
          d = {r.at("entailment").get<double>(), r.at("neutral").get<double>(),
               r.at("contradiction").get<double>()};
        } catch (const json::exception&) {
          throw ProtocolError("result " + std::to_string(i) +
                              " lacks numeric probabilities");
        }
        d.Validate("result " + std::to_string(i));
        out.push_back(d);
      }
      return out;
    } catch (const TransportError&) {
      if (attempt >= options_.retries) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(50 << attempt));
    }
  }
}

}  // namespace xfaith
