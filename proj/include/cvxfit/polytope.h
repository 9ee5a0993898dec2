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

#include <map>
#include <span>
#include <vector>

#include "cvxfit/hull.h"
#include "cvxfit/types.h"

namespace cvxfit {

constexpr double kDefaultConditionCap = 1e8;

/// Coincident primal vertices are merged below this fraction of the
/// polytope's bounding-box diagonal.
constexpr double kVertexMergeFraction = 1e-7;

/// The halfspace normal . x <= offset. Offsets stay positive so the origin
/// is always strictly feasible.
struct Hyperplane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 1;
};

/// Intersection of halfspaces in a local frame, placed in the world by
/// `translation`.
struct ConvexPolyhedron {
  std::vector<Hyperplane> planes;
  Vec3 translation = Vec3::Zero();
  int id = 0;
};

struct VertexRecord {
  /// Canonical (lexicographically smallest valid) sorted plane triple; the
  /// only triple gradients flow through.
  std::array<int, 3> plane_ids = {0, 0, 0};
  /// Local-frame position solved from plane_ids.
  Vec3 position = Vec3::Zero();
  /// Every plane passing through this vertex, sorted.
  std::vector<int> incident_planes;
  /// All well-conditioned triples that produced this vertex, sorted.
  std::vector<std::array<int, 3>> triples;
};

struct PolytopeTopology {
  std::vector<VertexRecord> vertices;
  /// plane id -> vertex loop, counter-clockwise seen from outside.
  std::map<int, std::vector<int>> facets;
  /// Sorted ids of facet-defining planes.
  std::vector<int> active_plane_ids;
  /// Triples rejected as ill-conditioned during construction.
  int dropped_triples = 0;
};

struct MeshVertex {
  Vec3 position = Vec3::Zero();
  /// Index into the topology's vertices, -1 once provenance is lost.
  int record = -1;
  int convex_id = -1;
};

struct Mesh {
  std::vector<MeshVertex> vertices;
  std::vector<Tri> triangles;
  /// Source plane per triangle, -1 when unknown.
  std::vector<int> triangle_planes;
};

/// Dual point normal / offset. Throws Error(kNonPositiveOffset) if
/// offset <= 0.
Vec3 Dualize(const Hyperplane& plane);

/// Vertices and facets of the intersection of `planes`, found as facets of
/// the convex hull of the dual points. `tolerance` is the relative hull
/// tolerance.
PolytopeTopology IntersectHalfspaces(
    std::span<const Hyperplane> planes,
    double tolerance = kDefaultHullTolerance);

/// Intersection point of three planes by a direct 3x3 solve. Throws
/// Error(kIllConditioned) above `condition_cap`.
Vec3 SolveVertex(const Hyperplane& p1, const Hyperplane& p2,
                 const Hyperplane& p3,
                 double condition_cap = kDefaultConditionCap);

/// Re-solves every vertex of `topology` from its canonical triple with new
/// plane parameters, keeping the combinatorics frozen.
PolytopeTopology ResolvePositions(const PolytopeTopology& topology,
                                  std::span<const Hyperplane> planes);

/// World-space triangle mesh; facet loops are fanned from their
/// lowest-index vertex.
Mesh BuildMesh(const ConvexPolyhedron& poly, const PolytopeTopology& topology);

/// IntersectHalfspaces followed by BuildMesh.
Mesh MeshConvex(const ConvexPolyhedron& poly);

double SignedVolume(const Mesh& mesh);

/// Indices of planes that define no facet of the intersection.
std::vector<int> RedundantPlanes(std::span<const Hyperplane> planes,
                                 double tolerance = kDefaultHullTolerance);

/// One round of Loop subdivision of a closed triangle mesh. Provenance is
/// cleared. Throws Error(kNotManifold) if an edge is not shared by exactly
/// two triangles.
Mesh LoopSubdivide(const Mesh& mesh);

/// Merges several meshes into one, offsetting indices.
Mesh ConcatMeshes(std::span<const Mesh> meshes);

}  // namespace cvxfit
