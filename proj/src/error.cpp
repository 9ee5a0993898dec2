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

#include "cvxfit/error.h"

namespace cvxfit {

const char* ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateInput:
      return "DegenerateInput";
    case ErrorCode::kNonPositiveOffset:
      return "NonPositiveOffset";
    case ErrorCode::kUnboundedOrDegenerate:
      return "UnboundedOrDegenerate";
    case ErrorCode::kIllConditioned:
      return "IllConditioned";
    case ErrorCode::kEmptyTopology:
      return "EmptyTopology";
    case ErrorCode::kNotManifold:
      return "NotManifold";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kEmptyMesh:
      return "EmptyMesh";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kBehindCamera:
      return "BehindCamera";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

}  // namespace cvxfit
