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

#ifndef XFAITH_ERROR_H_
#define XFAITH_ERROR_H_

#include <stdexcept>
#include <string>

namespace xfaith {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kValidation,      // bad input data or configuration
  kParse,           // malformed record
  kTransport,       // remote backend unreachable or timed out; retryable
  kProtocol,        // remote backend answered with something unusable
  kUndefinedMetric, // metric has no value for this input (e.g. one class)
  kDegenerate,      // degenerate probability distribution
  kCache,           // cache file corrupt or of the wrong version
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  bool retryable() const { return kind_ == ErrorKind::kTransport; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

class ParseError : public Error {
 public:
  // line is 1-based; 0 means "not tied to a line".
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ErrorKind::kTransport, what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorKind::kProtocol, what) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& what)
      : Error(ErrorKind::kUndefinedMetric, what) {}
};

class DegenerateDistributionError : public Error {
 public:
  explicit DegenerateDistributionError(const std::string& what)
      : Error(ErrorKind::kDegenerate, what) {}
};

class CacheError : public Error {
 public:
  // offset is the byte offset of the offending line within the file.
  CacheError(const std::string& what, std::size_t offset)
      : Error(ErrorKind::kCache, what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class CacheVersionError : public CacheError {
 public:
  CacheVersionError(const std::string& what, std::size_t offset)
      : CacheError(what, offset) {}
};

// Rethrows e as the same error class with "context: " prepended.
[[noreturn]] void RethrowWithContext(const Error& e, const std::string& context);

// Exit codes: 0 ok, 1 validation, 2 transport, 3 internal.
int ExitCodeFor(const Error& e);

}  // namespace xfaith

#endif  // XFAITH_ERROR_H_
