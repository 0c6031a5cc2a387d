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

#ifndef XFAITH_IO_H_
#define XFAITH_IO_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace xfaith {

std::string Sha256Hex(std::string_view data);

std::string ReadFile(const std::filesystem::path& path);

// Splits a stream into lines, dropping a trailing '\r' from each.
std::vector<std::string> ReadLines(std::istream& in);

// Writes to a sibling temporary file and renames it over path, so a reader
// never sees a partially written output.
void AtomicWriteFile(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace xfaith

#endif  // XFAITH_IO_H_
