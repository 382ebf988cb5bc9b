// Copyright 2026 The skillbpe Authors
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

#ifndef SKILLBPE_ERRORS_HPP_
#define SKILLBPE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace skillbpe
{

/// Malformed or inconsistent input data (dataset files, libraries, maps).
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated. Indicates a bug, not bad input.
class InvariantError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Invalid configuration or arguments supplied by the caller.
class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

[[noreturn]] void throw_invariant(const std::string & what);

}  // namespace skillbpe

#endif  // SKILLBPE_ERRORS_HPP_
