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

#include "cvxfit/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdint>

#include "cvxfit/error.h"
#include "cvxfit/parallel.h"
#include "cvxfit/random.h"

namespace cvxfit {
namespace {

constexpr size_t kChunk = 2048;

// Points bucketed by cell with a counting sort; cells are cubes of side h.
class PointGrid {
 public:
  explicit PointGrid(std::span<const Vec3> points) : points_(points) {
    min_ = points[0];
    Vec3 max = points[0];
    for (const Vec3& p : points) {
      min_ = min_.cwiseMin(p);
      max = max.cwiseMax(p);
    }
    const Vec3 extent = max - min_;
    // About two points per cell, sized on the populated extent.
    const double n = static_cast<double>(points.size());
    double measure = 1;
    int dims = 0;
    const double floor = 1e-12 * std::max(1.0, extent.maxCoeff());
    for (int k = 0; k < 3; ++k) {
      if (extent[k] > floor) {
        measure *= extent[k];
        ++dims;
      }
    }
    h_ = dims == 0 ? 1.0 : std::pow(2.0 * measure / n, 1.0 / dims);
    h_ = std::max(h_, extent.maxCoeff() / 1024.0);
    if (!(h_ > 0)) h_ = 1.0;
    for (int k = 0; k < 3; ++k) {
      dims_[k] = std::max<int64_t>(1, static_cast<int64_t>(extent[k] / h_) + 1);
    }
    std::vector<int64_t> cell_of(points.size());
    start_.assign(dims_[0] * dims_[1] * dims_[2] + 1, 0);
    for (size_t i = 0; i < points.size(); ++i) {
      const auto c = CellOf(points[i]);
      cell_of[i] = Flat(Clamp(c[0], 0), Clamp(c[1], 1), Clamp(c[2], 2));
      ++start_[cell_of[i] + 1];
    }
    for (size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    order_.resize(points.size());
    std::vector<int64_t> fill(start_.begin(), start_.end() - 1);
    for (size_t i = 0; i < points.size(); ++i) {
      order_[fill[cell_of[i]]++] = static_cast<int>(i);
    }
  }

  Neighbor Nearest(const Vec3& q) const {
    const auto qc = CellOf(q);
    Neighbor best{-1, std::numeric_limits<double>::infinity()};
    // Shells below r0 cannot intersect the grid.
    int64_t r0 = 0;
    for (int k = 0; k < 3; ++k) {
      r0 = std::max(r0, std::max<int64_t>(-qc[k], qc[k] - (dims_[k] - 1)));
    }
    int64_t r_max = 0;
    for (int k = 0; k < 3; ++k) {
      r_max = std::max(r_max, std::max<int64_t>(qc[k], dims_[k] - 1 - qc[k]));
    }
    for (int64_t r = r0; r <= r_max; ++r) {
      VisitShell(qc, r, q, best);
      // Every unvisited cell is at least r cells away, hence r*h in space.
      const double bound = static_cast<double>(r) * h_;
      if (best.index >= 0 && best.distance_sq <= bound * bound) break;
    }
    return best;
  }

 private:
  std::array<int64_t, 3> CellOf(const Vec3& p) const {
    std::array<int64_t, 3> c;
    for (int k = 0; k < 3; ++k) {
      const double f = std::floor((p[k] - min_[k]) / h_);
      c[k] = static_cast<int64_t>(std::clamp(f, -1e15, 1e15));
    }
    return c;
  }
  int64_t Clamp(int64_t c, int k) const {
    return std::clamp<int64_t>(c, 0, dims_[k] - 1);
  }
  int64_t Flat(int64_t x, int64_t y, int64_t z) const {
    return (z * dims_[1] + y) * dims_[0] + x;
  }

  void VisitCell(int64_t x, int64_t y, int64_t z, const Vec3& q,
                 Neighbor& best) const {
    const int64_t c = Flat(x, y, z);
    for (int64_t i = start_[c]; i < start_[c + 1]; ++i) {
      const int idx = order_[i];
      const double d2 = (points_[idx] - q).squaredNorm();
      if (d2 < best.distance_sq ||
          (d2 == best.distance_sq && idx < best.index)) {
        best = {idx, d2};
      }
    }
  }

  void VisitShell(const std::array<int64_t, 3>& qc, int64_t r, const Vec3& q,
                  Neighbor& best) const {
    const int64_t x0 = std::max<int64_t>(qc[0] - r, 0);
    const int64_t x1 = std::min<int64_t>(qc[0] + r, dims_[0] - 1);
    const int64_t y0 = std::max<int64_t>(qc[1] - r, 0);
    const int64_t y1 = std::min<int64_t>(qc[1] + r, dims_[1] - 1);
    const int64_t z0 = std::max<int64_t>(qc[2] - r, 0);
    const int64_t z1 = std::min<int64_t>(qc[2] + r, dims_[2] - 1);
    for (int64_t z = z0; z <= z1; ++z) {
      const bool z_face = std::abs(z - qc[2]) == r;
      for (int64_t y = y0; y <= y1; ++y) {
        const bool yz_face = z_face || std::abs(y - qc[1]) == r;
        if (yz_face) {
          for (int64_t x = x0; x <= x1; ++x) VisitCell(x, y, z, q, best);
        } else {
          if (qc[0] - r >= 0) VisitCell(qc[0] - r, y, z, q, best);
          if (r > 0 && qc[0] + r < dims_[0]) VisitCell(qc[0] + r, y, z, q, best);
        }
      }
    }
  }

  std::span<const Vec3> points_;
  Vec3 min_;
  double h_ = 1;
  std::array<int64_t, 3> dims_ = {1, 1, 1};
  std::vector<int64_t> start_;
  std::vector<int> order_;
};

void RequireNonEmpty(const SampledSurface& a, const SampledSurface& b) {
  if (a.points.empty() || b.points.empty()) {
    throw Error(ErrorCode::kEmptyInput, "empty point set");
  }
}

}  // namespace

SampledSurface SampleSurface(std::span<const Mesh> meshes, int count,
                             uint64_t seed) {
  struct Source {
    Vec3 a, e1, e2, normal;
  };
  std::vector<Source> sources;
  std::vector<double> cumulative;
  double total = 0;
  for (const Mesh& mesh : meshes) {
    for (const Tri& t : mesh.triangles) {
      const Vec3& a = mesh.vertices[t[0]].position;
      const Vec3 e1 = mesh.vertices[t[1]].position - a;
      const Vec3 e2 = mesh.vertices[t[2]].position - a;
      const Vec3 cross = e1.cross(e2);
      const double area = 0.5 * cross.norm();
      const Vec3 normal = area > 0 ? Vec3(cross.normalized()) : Vec3::UnitZ();
      sources.push_back({a, e1, e2, normal});
      total += area;
      cumulative.push_back(total);
    }
  }
  if (!(total > 0)) {
    throw Error(ErrorCode::kEmptyMesh, "no triangle to sample");
  }
  SampledSurface out;
  if (count <= 0) return out;
  out.points.reserve(count);
  out.normals.reserve(count);
  out.triangles.reserve(count);
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const double pick = rng.Uniform() * total;
    size_t t = std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
               cumulative.begin();
    t = std::min(t, sources.size() - 1);
    double u = rng.Uniform();
    double v = rng.Uniform();
    if (u + v > 1) {
      u = 1 - u;
      v = 1 - v;
    }
    const Source& s = sources[t];
    out.points.push_back(s.a + u * s.e1 + v * s.e2);
    out.normals.push_back(s.normal);
    out.triangles.push_back(static_cast<int>(t));
  }
  return out;
}

SampledSurface SampleSurface(const Mesh& mesh, int count, uint64_t seed) {
  return SampleSurface(std::span<const Mesh>(&mesh, 1), count, seed);
}

std::vector<Neighbor> NearestNeighbors(std::span<const Vec3> queries,
                                       std::span<const Vec3> references) {
  if (references.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no reference points");
  }
  const PointGrid grid(references);
  std::vector<Neighbor> out(queries.size());
  const size_t chunks = (queries.size() + kChunk - 1) / kChunk;
  ParallelFor(chunks, [&](size_t c) {
    const size_t end = std::min(queries.size(), (c + 1) * kChunk);
    for (size_t i = c * kChunk; i < end; ++i) out[i] = grid.Nearest(queries[i]);
  });
  return out;
}

double Chamfer(const SampledSurface& a, const SampledSurface& b, int order) {
  if (order != 1 && order != 2) {
    throw Error(ErrorCode::kInvalidConfig, "chamfer order must be 1 or 2");
  }
  RequireNonEmpty(a, b);
  auto directed = [order](const SampledSurface& from, const SampledSurface& to) {
    double sum = 0;
    for (const Neighbor& n : NearestNeighbors(from.points, to.points)) {
      sum += order == 1 ? std::sqrt(n.distance_sq) : n.distance_sq;
    }
    return sum / static_cast<double>(from.size());
  };
  return directed(a, b) + directed(b, a);
}

double NormalConsistency(const SampledSurface& a, const SampledSurface& b) {
  RequireNonEmpty(a, b);
  auto directed = [](const SampledSurface& from, const SampledSurface& to) {
    const std::vector<Neighbor> nn = NearestNeighbors(from.points, to.points);
    double sum = 0;
    for (size_t i = 0; i < nn.size(); ++i) {
      sum += std::abs(from.normals[i].dot(to.normals[nn[i].index]));
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(a, b) + directed(b, a));
}

}  // namespace cvxfit
