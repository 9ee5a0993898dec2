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

#include "cvxfit/camera.h"
#include "cvxfit/image.h"
#include "cvxfit/polytope.h"

namespace cvxfit {

struct SoftRasterConfig {
  /// Falloff of the coverage sigmoid, in squared pixels.
  double sigma = 1.0;
  /// Triangle bounding boxes are inflated by this many sqrt(sigma) pixels.
  double cull_radius = 4.0;
};

struct HardRender {
  Image silhouette;  // 0 or 1
  Image depth;       // view-axis depth of the nearest surface, 0 if empty
};

/// Z-buffered binary coverage of all triangles of all meshes. Triangles with
/// a vertex outside the near/far range are skipped.
HardRender RasterHard(std::span<const Mesh> meshes, const Camera& camera);

/// Soft silhouette rasterizer. Each triangle j covers pixel p with
/// probability D_j(p) = sigmoid(s * d^2 / sigma), where d is the screen
/// distance from the pixel center to the triangle boundary and s is +1
/// inside, -1 outside. Pixels aggregate 1 - prod_j (1 - D_j) over every
/// triangle of every mesh, so the union of convexes needs no special
/// treatment.
class SoftRasterizer {
 public:
  SoftRasterizer(std::span<const Mesh> meshes, const Camera& camera,
                 const SoftRasterConfig& config);
  /// Nothing rendered yet; call Render.
  SoftRasterizer(const Camera& camera, const SoftRasterConfig& config);

  /// Re-renders from scratch, reusing the image buffers.
  void Render(std::span<const Mesh> meshes);
  void set_config(const SoftRasterConfig& config);

  const Image& silhouette() const { return silhouette_; }

  /// World-space gradient for every vertex of every mesh, indexed
  /// [mesh][vertex], given dL/dI per pixel. Throws Error(kShapeMismatch) if
  /// the gradient image has the wrong size.
  std::vector<std::vector<Vec3>> Backward(const Image& pixel_grads) const;

 private:
  struct ScreenTri {
    int mesh;
    Tri v;
    std::array<Vec2, 3> p;
    double area2;
    int x0, x1, y0, y1;  // inclusive pixel range
    /// Signed distance to edge k's line, positive inside: n[k].q + c[k].
    /// Unset (area2 == 0) triangles fall back to the full bounding box.
    std::array<Vec2, 3> n;
    std::array<double, 3> c;
  };

  struct RowSpan {
    int x0, x1;  // pixels that may be affected, inclusive
    int f0, f1;  // fully saturated pixels, inclusive, empty if f0 > f1
  };
  RowSpan Span(const ScreenTri& tri, int y) const;

  Camera camera_;
  SoftRasterConfig config_;
  std::vector<ScreenTri> tris_;
  std::vector<std::vector<Eigen::Matrix<double, 2, 3>>> jacobians_;
  std::vector<size_t> mesh_sizes_;
  Image product_;  // prod_j (1 - D_j) per pixel
  Image silhouette_;
};

Image RasterSoft(std::span<const Mesh> meshes, const Camera& camera,
                 const SoftRasterConfig& config);

/// Recomputes the forward pass, then runs SoftRasterizer::Backward.
std::vector<std::vector<Vec3>> RasterSoftBackward(
    std::span<const Mesh> meshes, const Camera& camera,
    const SoftRasterConfig& config, const Image& pixel_grads);

struct L1Result {
  double loss = 0;
  Image grads;
};

/// Mean absolute difference and its subgradient sign(r - t) / N (zero at
/// equality). Throws Error(kShapeMismatch).
L1Result ImageL1(const Image& rendered, const Image& target);
/// Same, writing dL/dI into `grads` (resized as needed).
double ImageL1(const Image& rendered, const Image& target, Image* grads);

}  // namespace cvxfit
