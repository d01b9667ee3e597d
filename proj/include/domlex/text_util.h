//
// Copyright 2026 The domlex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DOMLEX_TEXT_UTIL_H_
#define DOMLEX_TEXT_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace domlex {

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Strict parsers: the whole field must be consumed. `what` names the field
// in the error message.
double ParseDouble(std::string_view field, std::string_view what);
int64_t ParseInt(std::string_view field, std::string_view what);

bool IsSpace(char c);
bool HasWhitespace(std::string_view token);

// Splits on runs of ASCII whitespace; empty fields are dropped.
std::vector<std::string_view> SplitWhitespace(std::string_view line);

// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string_view> SplitExact(std::string_view line, char sep);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

// Lines without their '\n' terminator (and without a trailing '\r').
std::vector<std::string> ReadLines(const std::filesystem::path& path);

std::string Sha256Hex(std::string_view data);
std::string Sha256OfFile(const std::filesystem::path& path);

}  // namespace domlex

#endif  // DOMLEX_TEXT_UTIL_H_
