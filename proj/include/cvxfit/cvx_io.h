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

#include <string>
#include <vector>

#include "cvxfit/optimize.h"
#include "cvxfit/polytope.h"

namespace cvxfit {

/// Planes live in one global list; convexes refer to them by index, and
/// translations align 1:1 with convexes.
struct CvxDocument {
  std::vector<Hyperplane> planes;
  std::vector<std::vector<int>> convexes;
  std::vector<Vec3> translations;

  bool operator==(const CvxDocument& other) const;
};

struct CvxWarning {
  int line = 0;
  std::string message;
};

/// Throws ParseError with the offending 1-based line. Non-positive offsets
/// are reported through `warnings` when it is non-null.
CvxDocument ParseCvx(const std::string& text,
                     std::vector<CvxWarning>* warnings = nullptr);

/// All p lines, then c lines, then t lines. Numbers use the shortest
/// decimal form that reads back to the same double.
std::string WriteCvx(const CvxDocument& doc);

/// One private block of planes per convex.
CvxDocument DocumentFromScene(const Scene& scene);

/// Convexes get ids 0..n-1 in document order. Throws Error(kShapeMismatch)
/// if an index is out of range.
std::vector<ConvexPolyhedron> ConvexesFromDocument(const CvxDocument& doc);

}  // namespace cvxfit
