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

#include "xfaith/error.h"

namespace xfaith {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(ErrorKind::kParse,
            line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

void RethrowWithContext(const Error& e, const std::string& context) {
  const std::string what = context + ": " + e.what();
  switch (e.kind()) {
    case ErrorKind::kValidation:
      throw ValidationError(what);
    case ErrorKind::kTransport:
      throw TransportError(what);
    case ErrorKind::kProtocol:
      throw ProtocolError(what);
    case ErrorKind::kUndefinedMetric:
      throw UndefinedMetricError(what);
    case ErrorKind::kDegenerate:
      throw DegenerateDistributionError(what);
    default:
      throw Error(e.kind(), what);
  }
}

int ExitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kValidation:
    case ErrorKind::kParse:
    case ErrorKind::kUndefinedMetric:
    case ErrorKind::kDegenerate:
    case ErrorKind::kCache:
      return 1;
    case ErrorKind::kTransport:
    case ErrorKind::kProtocol:
      return 2;
    case ErrorKind::kInternal:
      break;
  }
  return 3;
}

}  // namespace xfaith
