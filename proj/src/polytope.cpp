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

#include "cvxfit/polytope.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include <Eigen/Geometry>

#include "cvxfit/error.h"
#include "cvxfit/linalg3.h"

namespace cvxfit {
namespace {

using Triple = std::array<int, 3>;

Triple Sorted(int a, int b, int c) {
  Triple t = {a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

std::optional<Vec3> TrySolve(std::span<const Hyperplane> planes,
                             const Triple& t) {
  Mat3 a;
  Vec3 b;
  for (int r = 0; r < 3; ++r) {
    a.row(r) = planes[t[r]].normal.transpose();
    b[r] = planes[t[r]].offset;
  }
  const std::optional<Mat3> inv = Inverse3x3(a, kDefaultConditionCap);
  if (!inv) return std::nullopt;
  return Vec3(*inv * b);
}

int Find(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

struct DualVertex {
  Triple canonical;
  Vec3 position;
  std::vector<Triple> triples;
  std::vector<int> incident;
};

// One primal vertex per dual facet. Facets with more than three dual points
// are triangulated and every triple solved; the smallest valid triple wins.
std::optional<DualVertex> VertexFromDualFacet(
    std::span<const Hyperplane> planes, const std::vector<int>& loop,
    int& dropped) {
  DualVertex dv;
  std::vector<Triple> fan;
  for (size_t k = 1; k + 1 < loop.size(); ++k) {
    fan.push_back(Sorted(loop[0], loop[k], loop[k + 1]));
  }
  for (const Triple& t : fan) {
    if (TrySolve(planes, t)) {
      dv.triples.push_back(t);
    } else {
      ++dropped;
    }
  }
  if (dv.triples.empty()) {
    for (size_t i = 0; i < loop.size(); ++i) {
      for (size_t j = i + 1; j < loop.size(); ++j) {
        for (size_t k = j + 1; k < loop.size(); ++k) {
          const Triple t = Sorted(loop[i], loop[j], loop[k]);
          if (TrySolve(planes, t)) dv.triples.push_back(t);
        }
      }
    }
  }
  if (dv.triples.empty()) return std::nullopt;
  std::sort(dv.triples.begin(), dv.triples.end());
  dv.triples.erase(std::unique(dv.triples.begin(), dv.triples.end()),
                   dv.triples.end());
  dv.canonical = dv.triples.front();
  dv.position = *TrySolve(planes, dv.canonical);
  dv.incident = loop;
  std::sort(dv.incident.begin(), dv.incident.end());
  return dv;
}

}  // namespace

Vec3 Dualize(const Hyperplane& plane) {
  if (!(plane.offset > 0)) {
    throw Error(ErrorCode::kNonPositiveOffset,
                "plane offset " + std::to_string(plane.offset));
  }
  return plane.normal / plane.offset;
}

Vec3 SolveVertex(const Hyperplane& p1, const Hyperplane& p2,
                 const Hyperplane& p3, double condition_cap) {
  Mat3 a;
  a.row(0) = p1.normal.transpose();
  a.row(1) = p2.normal.transpose();
  a.row(2) = p3.normal.transpose();
  const std::optional<Mat3> inv = Inverse3x3(a, condition_cap);
  if (!inv) {
    throw Error(ErrorCode::kIllConditioned, "near-parallel plane triple");
  }
  return *inv * Vec3(p1.offset, p2.offset, p3.offset);
}

PolytopeTopology IntersectHalfspaces(std::span<const Hyperplane> planes,
                                     double tolerance) {
  if (planes.size() < 4) {
    throw Error(ErrorCode::kDegenerateInput, "fewer than 4 planes");
  }
  std::vector<Vec3> dual;
  dual.reserve(planes.size());
  for (const Hyperplane& p : planes) dual.push_back(Dualize(p));

  Hull hull;
  try {
    hull = ConvexHull3d(dual, tolerance);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
    throw Error(ErrorCode::kUnboundedOrDegenerate, e.what());
  }
  // The origin must be strictly inside the dual hull, otherwise the primal
  // intersection is unbounded.
  for (const HullFacet& f : hull.facets) {
    if (!(f.offset > hull.epsilon)) {
      throw Error(ErrorCode::kUnboundedOrDegenerate,
                  "origin not interior to the dual hull");
    }
  }

  PolytopeTopology topo;
  const int num_facets = static_cast<int>(hull.facets.size());
  std::vector<DualVertex> candidates;
  std::vector<int> candidate_of(num_facets, -1);
  for (int f = 0; f < num_facets; ++f) {
    std::optional<DualVertex> dv = VertexFromDualFacet(
        planes, hull.facets[f].vertex_ids, topo.dropped_triples);
    if (!dv) continue;
    candidate_of[f] = static_cast<int>(candidates.size());
    candidates.push_back(std::move(*dv));
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kUnboundedOrDegenerate, "no solvable vertex");
  }

  // Merge coincident primal vertices.
  Box box{candidates[0].position, candidates[0].position};
  for (const DualVertex& c : candidates) {
    box.min = box.min.cwiseMin(c.position);
    box.max = box.max.cwiseMax(c.position);
  }
  const double merge_tol = kVertexMergeFraction * box.Diagonal();
  const int num_cand = static_cast<int>(candidates.size());
  std::vector<int> order(num_cand);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double xa = candidates[a].position.x();
    const double xb = candidates[b].position.x();
    return xa < xb || (xa == xb && a < b);
  });
  std::vector<int> parent(num_cand);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < num_cand; ++i) {
    const Vec3& pi = candidates[order[i]].position;
    for (int j = i + 1; j < num_cand; ++j) {
      const Vec3& pj = candidates[order[j]].position;
      if (pj.x() - pi.x() > merge_tol) break;
      if ((pi - pj).norm() <= merge_tol) {
        const int ri = Find(parent, order[i]);
        const int rj = Find(parent, order[j]);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<int> vertex_of_cand(num_cand, -1);
  for (int c = 0; c < num_cand; ++c) {
    const int root = Find(parent, c);
    if (vertex_of_cand[root] < 0) {
      vertex_of_cand[root] = static_cast<int>(topo.vertices.size());
      topo.vertices.emplace_back();
    }
    vertex_of_cand[c] = vertex_of_cand[root];
    VertexRecord& rec = topo.vertices[vertex_of_cand[c]];
    rec.triples.insert(rec.triples.end(), candidates[c].triples.begin(),
                       candidates[c].triples.end());
    rec.incident_planes.insert(rec.incident_planes.end(),
                               candidates[c].incident.begin(),
                               candidates[c].incident.end());
  }
  for (VertexRecord& rec : topo.vertices) {
    std::sort(rec.triples.begin(), rec.triples.end());
    rec.triples.erase(std::unique(rec.triples.begin(), rec.triples.end()),
                      rec.triples.end());
    std::sort(rec.incident_planes.begin(), rec.incident_planes.end());
    rec.incident_planes.erase(
        std::unique(rec.incident_planes.begin(), rec.incident_planes.end()),
        rec.incident_planes.end());
    rec.plane_ids = rec.triples.front();
    rec.position = *TrySolve(planes, rec.plane_ids);
  }

  // Primal facet of plane i: the dual facets around dual vertex i, in cyclic
  // order, mapped to their primal vertices.
  std::map<std::pair<int, int>, int> edge_facet;
  for (int f = 0; f < num_facets; ++f) {
    const std::vector<int>& loop = hull.facets[f].vertex_ids;
    for (size_t k = 0; k < loop.size(); ++k) {
      edge_facet[{loop[k], loop[(k + 1) % loop.size()]}] = f;
    }
  }
  std::map<int, int> first_facet;
  for (int f = 0; f < num_facets; ++f) {
    for (int v : hull.facets[f].vertex_ids) first_facet.emplace(v, f);
  }
  for (const auto& [plane, f0] : first_facet) {
    std::vector<int> loop;
    int f = f0;
    for (int guard = 0; guard <= num_facets; ++guard) {
      if (candidate_of[f] >= 0) {
        const int v = vertex_of_cand[candidate_of[f]];
        if (loop.empty() || loop.back() != v) loop.push_back(v);
      }
      const std::vector<int>& fl = hull.facets[f].vertex_ids;
      const auto it = std::find(fl.begin(), fl.end(), plane);
      const int pred = it == fl.begin() ? fl.back() : *(it - 1);
      f = edge_facet.at({plane, pred});
      if (f == f0) break;
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    std::vector<int> distinct = loop;
    std::sort(distinct.begin(), distinct.end());
    if (distinct.size() < 3 ||
        std::unique(distinct.begin(), distinct.end()) != distinct.end()) {
      continue;
    }
    Vec3 newell = Vec3::Zero();
    for (size_t k = 0; k < loop.size(); ++k) {
      newell += topo.vertices[loop[k]].position.cross(
          topo.vertices[loop[(k + 1) % loop.size()]].position);
    }
    if (newell.dot(planes[plane].normal) < 0) {
      std::reverse(loop.begin(), loop.end());
    }
    std::rotate(loop.begin(), std::min_element(loop.begin(), loop.end()),
                loop.end());
    topo.facets.emplace(plane, std::move(loop));
    topo.active_plane_ids.push_back(plane);
  }
  return topo;
}

PolytopeTopology ResolvePositions(const PolytopeTopology& topology,
                                  std::span<const Hyperplane> planes) {
  PolytopeTopology out = topology;
  for (VertexRecord& rec : out.vertices) {
    rec.position = SolveVertex(planes[rec.plane_ids[0]],
                               planes[rec.plane_ids[1]],
                               planes[rec.plane_ids[2]]);
  }
  return out;
}

Mesh BuildMesh(const ConvexPolyhedron& poly,
               const PolytopeTopology& topology) {
  if (topology.vertices.size() < 4 || topology.facets.size() < 4) {
    throw Error(ErrorCode::kEmptyTopology,
                std::to_string(topology.vertices.size()) + " vertices");
  }
  Mesh mesh;
  mesh.vertices.reserve(topology.vertices.size());
  for (size_t i = 0; i < topology.vertices.size(); ++i) {
    mesh.vertices.push_back({topology.vertices[i].position + poly.translation,
                             static_cast<int>(i), poly.id});
  }
  for (const auto& [plane, loop] : topology.facets) {
    for (size_t k = 1; k + 1 < loop.size(); ++k) {
      mesh.triangles.push_back({loop[0], loop[k], loop[k + 1]});
      mesh.triangle_planes.push_back(plane);
    }
  }
  return mesh;
}

Mesh MeshConvex(const ConvexPolyhedron& poly) {
  return BuildMesh(poly, IntersectHalfspaces(poly.planes));
}

double SignedVolume(const Mesh& mesh) {
  double six_volume = 0;
  for (const Tri& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]].position;
    const Vec3& b = mesh.vertices[t[1]].position;
    const Vec3& c = mesh.vertices[t[2]].position;
    six_volume += a.dot(b.cross(c));
  }
  return six_volume / 6.0;
}

std::vector<int> RedundantPlanes(std::span<const Hyperplane> planes,
                                 double tolerance) {
  const PolytopeTopology topo = IntersectHalfspaces(planes, tolerance);
  std::vector<int> redundant;
  for (int i = 0; i < static_cast<int>(planes.size()); ++i) {
    if (!topo.facets.contains(i)) redundant.push_back(i);
  }
  return redundant;
}

Mesh LoopSubdivide(const Mesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  // Undirected edge -> (odd vertex index, opposite vertices).
  struct EdgeInfo {
    int odd = -1;
    std::vector<int> opposite;
  };
  std::map<std::pair<int, int>, EdgeInfo> edges;
  std::vector<std::pair<int, int>> edge_order;
  for (const Tri& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      const std::pair<int, int> key = {std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edges.try_emplace(key);
      if (inserted) edge_order.push_back(key);
      it->second.opposite.push_back(t[(e + 2) % 3]);
    }
  }
  std::vector<std::vector<int>> ring(nv);
  for (const auto& key : edge_order) {
    const EdgeInfo& info = edges.at(key);
    if (info.opposite.size() != 2) {
      throw Error(ErrorCode::kNotManifold,
                  "edge " + std::to_string(key.first) + "-" +
                      std::to_string(key.second) + " has " +
                      std::to_string(info.opposite.size()) + " faces");
    }
    ring[key.first].push_back(key.second);
    ring[key.second].push_back(key.first);
  }

  Mesh out;
  out.vertices.resize(nv + edge_order.size());
  for (int v = 0; v < nv; ++v) {
    const int n = static_cast<int>(ring[v].size());
    const Vec3& p = mesh.vertices[v].position;
    Vec3 pos = p;
    if (n > 0) {
      double beta;
      if (n == 3) {
        beta = 3.0 / 16.0;
      } else {
        const double c = 3.0 / 8.0 +
                         0.25 * std::cos(2.0 * std::numbers::pi / n);
        beta = (5.0 / 8.0 - c * c) / n;
      }
      Vec3 sum = Vec3::Zero();
      for (int w : ring[v]) sum += mesh.vertices[w].position;
      pos = (1.0 - n * beta) * p + beta * sum;
    }
    out.vertices[v] = {pos, -1, mesh.vertices[v].convex_id};
  }
  int next = nv;
  for (const auto& key : edge_order) {
    EdgeInfo& info = edges.at(key);
    info.odd = next++;
    const Vec3 pos = 0.375 * (mesh.vertices[key.first].position +
                              mesh.vertices[key.second].position) +
                     0.125 * (mesh.vertices[info.opposite[0]].position +
                              mesh.vertices[info.opposite[1]].position);
    out.vertices[info.odd] = {pos, -1, mesh.vertices[key.first].convex_id};
  }
  auto odd = [&](int a, int b) {
    return edges.at({std::min(a, b), std::max(a, b)}).odd;
  };
  for (const Tri& t : mesh.triangles) {
    const int ab = odd(t[0], t[1]);
    const int bc = odd(t[1], t[2]);
    const int ca = odd(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({t[1], bc, ab});
    out.triangles.push_back({t[2], ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }
  out.triangle_planes.assign(out.triangles.size(), -1);
  return out;
}

Mesh ConcatMeshes(std::span<const Mesh> meshes) {
  Mesh out;
  for (const Mesh& m : meshes) {
    const int base = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), m.vertices.begin(),
                        m.vertices.end());
    for (const Tri& t : m.triangles) {
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    out.triangle_planes.insert(out.triangle_planes.end(),
                               m.triangle_planes.begin(),
                               m.triangle_planes.end());
  }
  return out;
}

}  // namespace cvxfit
