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

#include "cvxfit/diffgeom.h"

#include <optional>

#include "cvxfit/error.h"
#include "cvxfit/linalg3.h"

namespace cvxfit {
namespace {

Mat3 InverseOrThrow(const Hyperplane& p1, const Hyperplane& p2,
                    const Hyperplane& p3) {
  Mat3 a;
  a.row(0) = p1.normal.transpose();
  a.row(1) = p2.normal.transpose();
  a.row(2) = p3.normal.transpose();
  const std::optional<Mat3> inv = Inverse3x3(a, kDefaultConditionCap);
  if (!inv) {
    throw Error(ErrorCode::kIllConditioned, "near-parallel plane triple");
  }
  return *inv;
}

}  // namespace

VertexJacobian ComputeVertexJacobian(const Hyperplane& p1,
                                     const Hyperplane& p2,
                                     const Hyperplane& p3, const Vec3& x) {
  VertexJacobian jac;
  jac.d_x_d_b = InverseOrThrow(p1, p2, p3);
  // Perturbing row i of A by da gives dx = -A^-1 e_i (da . x).
  for (int i = 0; i < 3; ++i) {
    jac.d_x_d_a[i] = -jac.d_x_d_b.col(i) * x.transpose();
  }
  return jac;
}

ParamGradients BackpropVertices(const PolytopeTopology& topology,
                                const ConvexPolyhedron& poly,
                                std::span<const Vec3> vertex_grads) {
  if (vertex_grads.size() != topology.vertices.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(vertex_grads.size()) + " gradients for " +
                    std::to_string(topology.vertices.size()) + " vertices");
  }
  ParamGradients out = ParamGradients::Zero(poly.planes.size());
  for (size_t v = 0; v < topology.vertices.size(); ++v) {
    const Vec3& g = vertex_grads[v];
    out.grad_t += g;
    if (g.isZero(0)) continue;
    const VertexRecord& rec = topology.vertices[v];
    const Mat3 inv = InverseOrThrow(poly.planes[rec.plane_ids[0]],
                                    poly.planes[rec.plane_ids[1]],
                                    poly.planes[rec.plane_ids[2]]);
    const Vec3 w = inv.transpose() * g;
    for (int i = 0; i < 3; ++i) {
      PlaneGradient& pg = out.planes[rec.plane_ids[i]];
      pg.grad_b += w[i];
      pg.grad_a -= w[i] * rec.position;
    }
  }
  return out;
}

}  // namespace cvxfit
