// Copyright 2026 The vcluster Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace vcluster {

/// Base class for every domain error raised by this library. Invalid
/// configuration, contract violations and malformed inputs derive from it;
/// plain std::exception is reserved for environment failures (I/O, OOM).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input text could not be parsed. Carries the 1-based line number.
struct ParseError : Error {
  int line;
  ParseError(int line_no, const std::string& msg)
      : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

/// Reading or writing a file failed for environmental reasons.
struct IoError : Error {
  using Error::Error;
};

}  // namespace vcluster
