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

#include "cvxfit/polytope.h"

namespace cvxfit {

/// Implicit derivatives of the solution x of A x = b, where the rows of A
/// are the three plane normals and b their offsets.
struct VertexJacobian {
  /// d_x_d_b(r, i) = dx_r / db_i, i.e. the inverse of A.
  Mat3 d_x_d_b = Mat3::Zero();
  /// d_x_d_a[i](r, c) = dx_r / d(a_i)_c.
  std::array<Mat3, 3> d_x_d_a = {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
};

struct PlaneGradient {
  Vec3 grad_a = Vec3::Zero();
  double grad_b = 0;
};

struct ParamGradients {
  std::vector<PlaneGradient> planes;
  Vec3 grad_t = Vec3::Zero();

  static ParamGradients Zero(size_t num_planes) {
    ParamGradients g;
    g.planes.resize(num_planes);
    return g;
  }
};

/// Throws Error(kIllConditioned) above the default condition cap.
VertexJacobian ComputeVertexJacobian(const Hyperplane& p1,
                                     const Hyperplane& p2,
                                     const Hyperplane& p3, const Vec3& x);

/// Pulls world-space per-vertex gradients back onto plane parameters and the
/// translation. Each vertex contributes through its canonical triple only;
/// planes touching no vertex get exactly zero. Throws Error(kShapeMismatch)
/// if `vertex_grads` is not aligned with `topology.vertices`.
ParamGradients BackpropVertices(const PolytopeTopology& topology,
                                const ConvexPolyhedron& poly,
                                std::span<const Vec3> vertex_grads);

}  // namespace cvxfit
