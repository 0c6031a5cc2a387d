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

#ifndef XFAITH_UNICODE_H_
#define XFAITH_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace xfaith {

struct CodePoint {
  char32_t value;
  std::size_t begin;  // byte range in the source string
  std::size_t end;
};

// Decodes UTF-8. Invalid sequences decode to U+FFFD spanning one byte.
std::vector<CodePoint> DecodeUtf8(std::string_view text);

std::string NormalizeNfc(std::string_view text);
std::string ToLower(std::string_view text);
std::string Trim(std::string_view text);

bool IsWhitespace(char32_t c);
// Han, kana, hangul and CJK punctuation blocks.
bool IsCjk(char32_t c);

}  // namespace xfaith

#endif  // XFAITH_UNICODE_H_
