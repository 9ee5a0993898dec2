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

#include <cstdint>
#include <span>
#include <vector>

#include "cvxfit/polytope.h"

namespace cvxfit {

constexpr int kDefaultSampleCount = 100000;

struct SampledSurface {
  std::vector<Vec3> points;
  /// Unit normal of the source triangle, one per point.
  std::vector<Vec3> normals;
  /// Source triangle per point, as an index into the concatenated meshes.
  std::vector<int> triangles;

  size_t size() const { return points.size(); }
};

/// Area-weighted, uniform-barycentric samples. Throws Error(kEmptyMesh) when
/// the meshes hold no triangle of positive area.
SampledSurface SampleSurface(std::span<const Mesh> meshes, int count,
                             uint64_t seed);
SampledSurface SampleSurface(const Mesh& mesh, int count, uint64_t seed);

struct Neighbor {
  int index = -1;
  double distance_sq = 0;
};

/// Exact nearest reference point for every query, via a uniform grid. Ties
/// go to the lowest reference index. Throws Error(kEmptyInput) if
/// `references` is empty.
std::vector<Neighbor> NearestNeighbors(std::span<const Vec3> queries,
                                       std::span<const Vec3> references);

/// Sum of the two directed mean nearest-neighbor distances raised to
/// `order` (1 or 2). Throws Error(kEmptyInput).
double Chamfer(const SampledSurface& a, const SampledSurface& b, int order);

/// Mean of |n . n'| over nearest-neighbor pairs, averaged over both
/// directions. Throws Error(kEmptyInput).
double NormalConsistency(const SampledSurface& a, const SampledSurface& b);

}  // namespace cvxfit
