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

#ifndef DOMLEX_ERROR_H_
#define DOMLEX_ERROR_H_

#include <stdexcept>
#include <string>

namespace domlex {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or record.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A precondition on arguments or configuration does not hold.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Degenerate numerical input (zero vectors, rank-deficient products, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace domlex

#endif  // DOMLEX_ERROR_H_
