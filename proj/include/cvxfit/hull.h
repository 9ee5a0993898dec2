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

#include <span>
#include <vector>

#include "cvxfit/types.h"

namespace cvxfit {

/// Relative hull tolerance; the absolute epsilon is this times the
/// bounding-box diagonal of the input.
constexpr double kDefaultHullTolerance = 1e-9;

/// Adjacent hull triangles whose normals differ by less than this angle
/// (radians) are merged into one polygonal facet.
constexpr double kFacetMergeAngle = 1e-7;

struct HullFacet {
  /// Input-point indices, counter-clockwise seen from outside, no collinear
  /// runs.
  std::vector<int> vertex_ids;
  Vec3 normal = Vec3::Zero();
  double offset = 0;
  std::vector<int> neighbor_ids;
};

struct Hull {
  std::vector<Vec3> points;
  std::vector<HullFacet> facets;
  /// Sorted indices of the points that are corners of some facet.
  std::vector<int> hull_vertex_ids;
  /// Absolute epsilon used during construction.
  double epsilon = 0;

  int NumEdges() const;
  double Volume() const;
};

/// Quickhull from an extreme-point tetrahedron. Throws
/// Error(kDegenerateInput) for fewer than four points or inputs that are
/// coplanar, collinear or coincident within the tolerance.
Hull ConvexHull3d(std::span<const Vec3> points,
                  double tolerance = kDefaultHullTolerance);

enum class PointClass { kStrictlyInside, kOnBoundary, kOutside };

/// `tolerance` is absolute.
PointClass ClassifyPoint(const Hull& hull, const Vec3& p, double tolerance);

}  // namespace cvxfit
