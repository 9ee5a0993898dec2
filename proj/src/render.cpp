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

#include "cvxfit/render.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxfit/error.h"

namespace cvxfit {
namespace {

// Beyond this |z| the sigmoid rounds to exactly 1 (inside) and 1 - D rounds
// to exactly 1 (outside) in double precision.
constexpr double kSaturation = 40.0;

inline double Cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

struct Coverage {
  enum Kind { kNone, kFull, kPartial } kind = kNone;
  double d = 0;       // D_j(p), valid for kPartial
  double sign = 0;    // +1 inside, -1 outside
  int edge = 0;       // nearest edge: p[edge] -> p[edge + 1]
  double t = 0;       // closest-point parameter along the nearest edge
  Vec2 diff;          // pixel - closest point
};

template <typename Tri2>
Coverage Evaluate(const Tri2& tri, const Vec2& q, double sigma) {
  Coverage c;
  const double limit = kSaturation * sigma;
  std::array<double, 3> e;
  std::array<double, 3> len2;
  bool inside = tri.area2 != 0;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = tri.p[k];
    const Vec2& b = tri.p[(k + 1) % 3];
    const Vec2 ab = b - a;
    len2[k] = ab.squaredNorm();
    e[k] = Cross(ab, q - a);
    if (e[k] * tri.area2 < 0) inside = false;
  }
  if (inside) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) best = std::min(best, e[k] * e[k] / len2[k]);
    if (best > limit) {
      c.kind = Coverage::kFull;
      return c;
    }
  } else if (tri.area2 != 0) {
    for (int k = 0; k < 3; ++k) {
      if (e[k] * tri.area2 < 0 && e[k] * e[k] / len2[k] > limit) return c;
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = tri.p[k];
    const Vec2 ab = tri.p[(k + 1) % 3] - a;
    double t = len2[k] > 0 ? (q - a).dot(ab) / len2[k] : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 diff = q - (a + t * ab);
    const double d2 = diff.squaredNorm();
    if (d2 < best) {
      best = d2;
      c.edge = k;
      c.t = t;
      c.diff = diff;
    }
  }
  c.sign = inside ? 1.0 : -1.0;
  const double z = c.sign * best / sigma;
  if (z > kSaturation) {
    c.kind = Coverage::kFull;
  } else if (z < -kSaturation) {
    c.kind = Coverage::kNone;
  } else {
    c.kind = Coverage::kPartial;
    c.d = 1.0 / (1.0 + std::exp(-z));
  }
  return c;
}

// Pixels x (centers at x + 0.5) where slope * (x + 0.5) + base >= 0, as an
// inclusive range clipped to [lo, hi].
void ClipHalfLine(double slope, double base, int* lo, int* hi) {
  if (slope == 0) {
    if (base < 0) *hi = *lo - 1;
    return;
  }
  const double root = -base / slope - 0.5;
  if (slope > 0) {
    *lo = std::max(*lo, static_cast<int>(std::clamp(std::ceil(root), -1e9, 1e9)));
  } else {
    *hi = std::min(*hi, static_cast<int>(std::clamp(std::floor(root), -1e9, 1e9)));
  }
}

bool InDepthRange(const Camera& camera, double z) {
  return z >= camera.near && z <= camera.far;
}

}  // namespace

HardRender RasterHard(std::span<const Mesh> meshes, const Camera& camera) {
  camera.Validate();
  const CameraFrame frame = MakeFrame(camera);
  HardRender out{Image(camera.width, camera.height, 0),
                 Image(camera.width, camera.height, 0)};
  Image zbuf(camera.width, camera.height,
             std::numeric_limits<double>::infinity());
  for (const Mesh& mesh : meshes) {
    std::vector<Projection> proj;
    proj.reserve(mesh.vertices.size());
    for (const MeshVertex& v : mesh.vertices) {
      proj.push_back(ProjectWithJacobian(camera, frame, v.position, nullptr));
    }
    for (const Tri& t : mesh.triangles) {
      const Projection& pa = proj[t[0]];
      const Projection& pb = proj[t[1]];
      const Projection& pc = proj[t[2]];
      if (!InDepthRange(camera, pa.depth) || !InDepthRange(camera, pb.depth) ||
          !InDepthRange(camera, pc.depth)) {
        continue;
      }
      const Vec2& a = pa.screen;
      const Vec2& b = pb.screen;
      const Vec2& c = pc.screen;
      const double area2 = Cross(b - a, c - a);
      if (area2 == 0 || !std::isfinite(area2)) continue;
      const int x0 = std::max(0, static_cast<int>(std::floor(
                                     std::min({a.x(), b.x(), c.x()}) - 0.5)));
      const int x1 = std::min(camera.width - 1,
                              static_cast<int>(std::ceil(
                                  std::max({a.x(), b.x(), c.x()}) - 0.5)));
      const int y0 = std::max(0, static_cast<int>(std::floor(
                                     std::min({a.y(), b.y(), c.y()}) - 0.5)));
      const int y1 = std::min(camera.height - 1,
                              static_cast<int>(std::ceil(
                                  std::max({a.y(), b.y(), c.y()}) - 0.5)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const Vec2 q(x + 0.5, y + 0.5);
          const double wa = Cross(c - b, q - b) / area2;
          const double wb = Cross(a - c, q - c) / area2;
          const double wc = Cross(b - a, q - a) / area2;
          if (wa < 0 || wb < 0 || wc < 0) continue;
          // Depth is affine in screen space only through 1/z.
          const double inv_z =
              wa / pa.depth + wb / pb.depth + wc / pc.depth;
          const double depth = 1.0 / inv_z;
          if (depth < zbuf.at(x, y)) {
            zbuf.at(x, y) = depth;
            out.depth.at(x, y) = depth;
            out.silhouette.at(x, y) = 1.0;
          }
        }
      }
    }
  }
  return out;
}

SoftRasterizer::SoftRasterizer(std::span<const Mesh> meshes,
                               const Camera& camera,
                               const SoftRasterConfig& config)
    : SoftRasterizer(camera, config) {
  Render(meshes);
}

SoftRasterizer::SoftRasterizer(const Camera& camera,
                               const SoftRasterConfig& config)
    : camera_(camera) {
  camera.Validate();
  set_config(config);
}

void SoftRasterizer::set_config(const SoftRasterConfig& config) {
  if (!(config.sigma > 0) || !(config.cull_radius >= 0)) {
    throw Error(ErrorCode::kInvalidConfig, "sigma must be positive");
  }
  config_ = config;
}

void SoftRasterizer::Render(std::span<const Mesh> meshes) {
  const Camera& camera = camera_;
  const SoftRasterConfig& config = config_;
  tris_.clear();
  const CameraFrame frame = MakeFrame(camera);
  const double pad = config.cull_radius * std::sqrt(config.sigma);
  jacobians_.resize(meshes.size());
  mesh_sizes_.resize(meshes.size());
  for (size_t m = 0; m < meshes.size(); ++m) {
    const Mesh& mesh = meshes[m];
    mesh_sizes_[m] = mesh.vertices.size();
    std::vector<Projection> proj(mesh.vertices.size());
    jacobians_[m].resize(mesh.vertices.size());
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
      proj[v] = ProjectWithJacobian(camera, frame, mesh.vertices[v].position,
                                    &jacobians_[m][v]);
    }
    for (const Tri& t : mesh.triangles) {
      if (!InDepthRange(camera, proj[t[0]].depth) ||
          !InDepthRange(camera, proj[t[1]].depth) ||
          !InDepthRange(camera, proj[t[2]].depth)) {
        continue;
      }
      ScreenTri st;
      st.mesh = static_cast<int>(m);
      st.v = t;
      for (int k = 0; k < 3; ++k) st.p[k] = proj[t[k]].screen;
      st.area2 = Cross(st.p[1] - st.p[0], st.p[2] - st.p[0]);
      const double lx = std::min({st.p[0].x(), st.p[1].x(), st.p[2].x()});
      const double hx = std::max({st.p[0].x(), st.p[1].x(), st.p[2].x()});
      const double ly = std::min({st.p[0].y(), st.p[1].y(), st.p[2].y()});
      const double hy = std::max({st.p[0].y(), st.p[1].y(), st.p[2].y()});
      st.x0 = std::max(0, static_cast<int>(std::floor(lx - pad - 0.5)));
      st.x1 = std::min(camera.width - 1,
                       static_cast<int>(std::ceil(hx + pad - 0.5)));
      st.y0 = std::max(0, static_cast<int>(std::floor(ly - pad - 0.5)));
      st.y1 = std::min(camera.height - 1,
                       static_cast<int>(std::ceil(hy + pad - 0.5)));
      if (st.x0 > st.x1 || st.y0 > st.y1) continue;
      if (st.area2 != 0 && std::isfinite(st.area2)) {
        const double orient = st.area2 > 0 ? 1.0 : -1.0;
        for (int k = 0; k < 3; ++k) {
          const Vec2& a = st.p[k];
          const Vec2 ab = st.p[(k + 1) % 3] - a;
          st.n[k] = orient / ab.norm() * Vec2(-ab.y(), ab.x());
          st.c[k] = -st.n[k].dot(a);
        }
      } else {
        st.area2 = 0;
      }
      tris_.push_back(st);
    }
  }

  product_.width = camera.width;
  product_.height = camera.height;
  product_.values.assign(static_cast<size_t>(camera.width) * camera.height, 1.0);
  for (const ScreenTri& st : tris_) {
    for (int y = st.y0; y <= st.y1; ++y) {
      double* row = &product_.values[static_cast<size_t>(y) * camera.width];
      const RowSpan span = Span(st, y);
      for (int x = std::max(span.f0, span.x0); x <= std::min(span.f1, span.x1);
           ++x) {
        row[x] = 0;
      }
      for (int x = span.x0; x <= span.x1; ++x) {
        if (x == span.f0 && span.f0 <= span.f1) x = span.f1 + 1;
        if (x > span.x1) break;
        if (row[x] == 0) continue;
        const Coverage c = Evaluate(st, Vec2(x + 0.5, y + 0.5), config.sigma);
        if (c.kind == Coverage::kFull) {
          row[x] = 0;
        } else if (c.kind == Coverage::kPartial) {
          row[x] *= 1.0 - c.d;
        }
      }
    }
  }
  silhouette_.width = camera.width;
  silhouette_.height = camera.height;
  silhouette_.values.resize(product_.size());
  for (size_t i = 0; i < product_.size(); ++i) {
    silhouette_.values[i] = 1.0 - product_.values[i];
  }
}

SoftRasterizer::RowSpan SoftRasterizer::Span(const ScreenTri& tri,
                                             int y) const {
  RowSpan span{tri.x0, tri.x1, 0, -1};
  if (tri.area2 == 0) return span;
  const double qy = y + 0.5;
  // Outside this band every coverage term is culled; inside the inner
  // region every term saturates to exactly one.
  const double pad = config_.cull_radius * std::sqrt(config_.sigma);
  const double full = std::sqrt(kSaturation * config_.sigma) * (1 + 1e-9) + 1e-9;
  span.f0 = span.x0;
  span.f1 = span.x1;
  for (int k = 0; k < 3; ++k) {
    const double base = tri.n[k].y() * qy + tri.c[k];
    ClipHalfLine(tri.n[k].x(), base + pad + 1e-9, &span.x0, &span.x1);
    ClipHalfLine(tri.n[k].x(), base - full, &span.f0, &span.f1);
  }
  return span;
}

std::vector<std::vector<Vec3>> SoftRasterizer::Backward(
    const Image& pixel_grads) const {
  if (!pixel_grads.SameShape(silhouette_)) {
    throw Error(ErrorCode::kShapeMismatch, "pixel gradient image size");
  }
  std::vector<std::vector<Vec2>> screen_grads(mesh_sizes_.size());
  for (size_t m = 0; m < mesh_sizes_.size(); ++m) {
    screen_grads[m].assign(mesh_sizes_[m], Vec2::Zero());
  }
  const double sigma = config_.sigma;
  for (const ScreenTri& st : tris_) {
    std::array<Vec2, 3> acc = {Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
    bool touched = false;
    for (int y = st.y0; y <= st.y1; ++y) {
      const size_t base = static_cast<size_t>(y) * camera_.width;
      const RowSpan span = Span(st, y);
      for (int x = span.x0; x <= span.x1; ++x) {
        if (x == span.f0 && span.f0 <= span.f1) x = span.f1 + 1;
        if (x > span.x1) break;
        const double g = pixel_grads.values[base + x];
        const double prod = product_.values[base + x];
        if (g == 0 || prod == 0) continue;
        const Coverage c = Evaluate(st, Vec2(x + 0.5, y + 0.5), sigma);
        if (c.kind != Coverage::kPartial) continue;
        // dS/dz = P * D, with S = 1 - P and z = sign * d^2 / sigma.
        const double dl_dd2 = g * prod * c.d * c.sign / sigma;
        const Vec2 w = -2.0 * dl_dd2 * c.diff;
        acc[c.edge] += (1.0 - c.t) * w;
        acc[(c.edge + 1) % 3] += c.t * w;
        touched = true;
      }
    }
    if (!touched) continue;
    for (int k = 0; k < 3; ++k) screen_grads[st.mesh][st.v[k]] += acc[k];
  }

  std::vector<std::vector<Vec3>> out(mesh_sizes_.size());
  for (size_t m = 0; m < mesh_sizes_.size(); ++m) {
    out[m].resize(mesh_sizes_[m]);
    for (size_t v = 0; v < mesh_sizes_[m]; ++v) {
      out[m][v] = jacobians_[m][v].transpose() * screen_grads[m][v];
    }
  }
  return out;
}

Image RasterSoft(std::span<const Mesh> meshes, const Camera& camera,
                 const SoftRasterConfig& config) {
  return SoftRasterizer(meshes, camera, config).silhouette();
}

std::vector<std::vector<Vec3>> RasterSoftBackward(
    std::span<const Mesh> meshes, const Camera& camera,
    const SoftRasterConfig& config, const Image& pixel_grads) {
  return SoftRasterizer(meshes, camera, config).Backward(pixel_grads);
}

L1Result ImageL1(const Image& rendered, const Image& target) {
  L1Result out;
  out.loss = ImageL1(rendered, target, &out.grads);
  return out;
}

double ImageL1(const Image& rendered, const Image& target, Image* grads) {
  if (!rendered.SameShape(target)) {
    throw Error(ErrorCode::kShapeMismatch, "image sizes differ");
  }
  grads->width = rendered.width;
  grads->height = rendered.height;
  grads->values.resize(rendered.size());
  const size_t n = rendered.size();
  if (n == 0) return 0;
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0;
  for (size_t i = 0; i < n; ++i) {
    const double d = rendered.values[i] - target.values[i];
    sum += std::abs(d);
    grads->values[i] = d > 0 ? inv_n : (d < 0 ? -inv_n : 0.0);
  }
  return sum * inv_n;
}

}  // namespace cvxfit
