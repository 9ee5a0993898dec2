// Copyright 2026 The cvxfit Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace cvxfit {

enum class ErrorCode {
  kDegenerateInput,
  kNonPositiveOffset,
  kUnboundedOrDegenerate,
  kIllConditioned,
  kEmptyTopology,
  kNotManifold,
  kShapeMismatch,
  kInvalidConfig,
  kEmptyMesh,
  kEmptyInput,
  kParseError,
  kBehindCamera,
  kIoError,
};

const char* ErrorName(ErrorCode code);

/// Every recoverable failure in the library is reported as an Error carrying
/// one of the codes above; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures also carry the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace cvxfit
