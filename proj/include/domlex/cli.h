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

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data
// error (unreadable or malformed input), 3 stage failure.

#ifndef DOMLEX_CLI_H_
#define DOMLEX_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace domlex {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitStage = 3;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);
int RunCli(int argc, char** argv);

}  // namespace domlex

#endif  // DOMLEX_CLI_H_
