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

#ifndef XFAITH_REMOTE_SCORER_H_
#define XFAITH_REMOTE_SCORER_H_

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "xfaith/scorer.h"

namespace xfaith {

struct RemoteScorerOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"
  std::chrono::milliseconds timeout{30000};
  std::size_t max_batch = 64;  // pairs per POST
  int parallelism = 4;         // in-flight POSTs across all callers
  int retries = 2;             // extra attempts on transport errors
};

// Client for the sidecar protocol:
//   GET  /v1/health -> {"status": "ok", "scorer_id": str}
//   POST /v1/score  {"pairs": [{"premise", "hypothesis"}]}
//                -> {"results": [{"entailment", "neutral", "contradiction"}]}
// Connection failures, timeouts and 503 raise TransportError; other non-200
// statuses and malformed bodies raise ProtocolError.
class RemoteScorer : public Scorer {
 public:
  // Queries /v1/health once to learn the scorer identity.
  explicit RemoteScorer(RemoteScorerOptions options);
  ~RemoteScorer() override;

  std::string Identity() const override { return scorer_id_; }

 protected:
  std::vector<NliDistribution> DoScore(
      std::span<const ScorePair> pairs) override;

 private:
  std::vector<NliDistribution> PostChunk(std::span<const ScorePair> pairs);

  RemoteScorerOptions options_;
  std::string host_;
  int port_ = 80;
  std::string scorer_id_;
  std::counting_semaphore<> in_flight_;
};

}  // namespace xfaith

#endif  // XFAITH_REMOTE_SCORER_H_
