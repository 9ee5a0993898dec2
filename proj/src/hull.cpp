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

#include "cvxfit/hull.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Geometry>

#include "cvxfit/error.h"

namespace cvxfit {
namespace {

struct Face {
  Tri v;
  // nbr[i] is the face across edge v[i] -> v[(i + 1) % 3].
  std::array<int, 3> nbr = {-1, -1, -1};
  Vec3 normal = Vec3::Zero();
  double offset = 0;
  std::vector<int> outside;
  bool alive = true;
  int visit = -1;
};

struct HorizonEdge {
  int from;
  int to;
  int outer_face;
};

int Find(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

class QuickHull {
 public:
  QuickHull(std::span<const Vec3> points, double eps)
      : points_(points), eps_(eps) {}

  std::vector<Face> Run() {
    InitialSimplex();
    for (size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive || faces_[f].outside.empty()) continue;
      AddPoint(static_cast<int>(f));
    }
    std::vector<Face> alive;
    for (Face& face : faces_) {
      if (face.alive) alive.push_back(face);
    }
    return alive;
  }

  // Alive faces are renumbered by Run(); this remaps their neighbor indices.
  std::vector<int> AliveIndexMap() const {
    std::vector<int> map(faces_.size(), -1);
    int next = 0;
    for (size_t f = 0; f < faces_.size(); ++f) {
      if (faces_[f].alive) map[f] = next++;
    }
    return map;
  }

 private:
  double Distance(const Face& face, int p) const {
    return face.normal.dot(points_[p]) - face.offset;
  }

  void SetPlane(Face& face, const Face* fallback) const {
    const Vec3& a = points_[face.v[0]];
    const Vec3& b = points_[face.v[1]];
    const Vec3& c = points_[face.v[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len > 0 && std::isfinite(len)) {
      n /= len;
    } else if (fallback != nullptr) {
      n = fallback->normal;
    } else {
      throw Error(ErrorCode::kDegenerateInput, "zero-area hull face");
    }
    face.normal = n;
    face.offset = n.dot((a + b + c) / 3.0);
  }

  void InitialSimplex() {
    const int n = static_cast<int>(points_.size());
    std::array<int, 6> extremes{};
    for (int axis = 0; axis < 3; ++axis) {
      int lo = 0;
      int hi = 0;
      for (int i = 1; i < n; ++i) {
        if (points_[i][axis] < points_[lo][axis]) lo = i;
        if (points_[i][axis] > points_[hi][axis]) hi = i;
      }
      extremes[2 * axis] = lo;
      extremes[2 * axis + 1] = hi;
    }
    int i0 = extremes[0];
    int i1 = extremes[1];
    double best = -1;
    for (int a = 0; a < 6; ++a) {
      for (int b = a + 1; b < 6; ++b) {
        const double d = (points_[extremes[a]] - points_[extremes[b]]).norm();
        if (d > best) {
          best = d;
          i0 = std::min(extremes[a], extremes[b]);
          i1 = std::max(extremes[a], extremes[b]);
        }
      }
    }
    if (best <= eps_) {
      throw Error(ErrorCode::kDegenerateInput, "points are coincident");
    }

    const Vec3 dir = (points_[i1] - points_[i0]).normalized();
    int i2 = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const Vec3 d = points_[i] - points_[i0];
      const double dist = (d - d.dot(dir) * dir).norm();
      if (dist > best) {
        best = dist;
        i2 = i;
      }
    }
    if (i2 < 0) throw Error(ErrorCode::kDegenerateInput, "points are collinear");

    const Vec3 normal = (points_[i1] - points_[i0])
                            .cross(points_[i2] - points_[i0])
                            .normalized();
    int i3 = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const double dist = std::abs(normal.dot(points_[i] - points_[i0]));
      if (dist > best) {
        best = dist;
        i3 = i;
      }
    }
    if (i3 < 0) throw Error(ErrorCode::kDegenerateInput, "points are coplanar");

    // Orient so that every face looks away from the fourth vertex.
    if (normal.dot(points_[i3] - points_[i0]) > 0) std::swap(i1, i2);
    const std::array<Tri, 4> tris = {
        Tri{i0, i1, i2}, Tri{i0, i3, i1}, Tri{i1, i3, i2}, Tri{i2, i3, i0}};
    std::map<std::pair<int, int>, int> edge_face;
    for (int f = 0; f < 4; ++f) {
      Face face;
      face.v = tris[f];
      SetPlane(face, nullptr);
      faces_.push_back(face);
      for (int e = 0; e < 3; ++e) {
        edge_face[{tris[f][e], tris[f][(e + 1) % 3]}] = f;
      }
    }
    for (int f = 0; f < 4; ++f) {
      for (int e = 0; e < 3; ++e) {
        faces_[f].nbr[e] = edge_face.at({tris[f][(e + 1) % 3], tris[f][e]});
      }
    }

    std::vector<int> rest;
    for (int i = 0; i < n; ++i) {
      if (i != i0 && i != i1 && i != i2 && i != i3) rest.push_back(i);
    }
    Assign(rest, {0, 1, 2, 3});
  }

  void Assign(const std::vector<int>& candidates,
              const std::vector<int>& targets) {
    for (int p : candidates) {
      int best_face = -1;
      double best = eps_;
      for (int f : targets) {
        const double d = Distance(faces_[f], p);
        if (d > best) {
          best = d;
          best_face = f;
        }
      }
      if (best_face >= 0) faces_[best_face].outside.push_back(p);
    }
  }

  void AddPoint(int seed) {
    const Face& start = faces_[seed];
    int eye = start.outside.front();
    double far = Distance(start, eye);
    for (int p : start.outside) {
      const double d = Distance(start, p);
      if (d > far || (d == far && p < eye)) {
        far = d;
        eye = p;
      }
    }

    // Flood the region visible from the eye point; its boundary is the
    // horizon.
    ++visit_;
    std::vector<int> visible;
    std::vector<HorizonEdge> horizon;
    std::vector<int> stack = {seed};
    faces_[seed].visit = visit_;
    visible.push_back(seed);
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      for (int e = 0; e < 3; ++e) {
        const int g = faces_[f].nbr[e];
        if (faces_[g].visit == visit_) continue;
        if (Distance(faces_[g], eye) > eps_) {
          faces_[g].visit = visit_;
          visible.push_back(g);
          stack.push_back(g);
        }
      }
    }
    for (int f : visible) {
      for (int e = 0; e < 3; ++e) {
        const int g = faces_[f].nbr[e];
        if (faces_[g].visit != visit_) {
          horizon.push_back({faces_[f].v[e], faces_[f].v[(e + 1) % 3], g});
        }
      }
    }

    if (horizon.size() < 3) {
      throw Error(ErrorCode::kDegenerateInput, "hull horizon collapsed");
    }

    std::vector<int> created;
    std::map<int, int> starts;
    std::map<int, int> ends;
    const Face fallback = faces_[seed];
    for (const HorizonEdge& h : horizon) {
      Face face;
      face.v = {h.from, h.to, eye};
      SetPlane(face, &fallback);
      const int id = static_cast<int>(faces_.size());
      faces_.push_back(face);
      created.push_back(id);
      if (!starts.emplace(h.from, id).second || !ends.emplace(h.to, id).second) {
        throw Error(ErrorCode::kDegenerateInput, "non-simple hull horizon");
      }
      faces_[id].nbr[0] = h.outer_face;
      Face& outer = faces_[h.outer_face];
      for (int e = 0; e < 3; ++e) {
        if (outer.v[e] == h.to && outer.v[(e + 1) % 3] == h.from) {
          outer.nbr[e] = id;
        }
      }
    }
    for (int id : created) {
      Face& face = faces_[id];
      const auto next = starts.find(face.v[1]);
      const auto prev = ends.find(face.v[0]);
      if (next == starts.end() || prev == ends.end()) {
        throw Error(ErrorCode::kDegenerateInput, "open hull horizon");
      }
      face.nbr[1] = next->second;
      face.nbr[2] = prev->second;
    }

    std::vector<int> orphans;
    for (int f : visible) {
      for (int p : faces_[f].outside) {
        if (p != eye) orphans.push_back(p);
      }
      faces_[f].outside.clear();
      faces_[f].alive = false;
    }
    std::sort(orphans.begin(), orphans.end());
    Assign(orphans, created);
  }

  std::span<const Vec3> points_;
  double eps_;
  std::vector<Face> faces_;
  int visit_ = 0;
};

double DistanceToLine(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0) return (p - a).norm();
  return (p - a).cross(d).norm() / std::sqrt(len2);
}

Vec3 NewellNormal(std::span<const Vec3> pts, const std::vector<int>& loop) {
  Vec3 n = Vec3::Zero();
  for (size_t i = 0; i < loop.size(); ++i) {
    n += pts[loop[i]].cross(pts[loop[(i + 1) % loop.size()]]);
  }
  return n;
}

}  // namespace

Hull ConvexHull3d(std::span<const Vec3> points, double tolerance) {
  if (points.size() < 4) {
    throw Error(ErrorCode::kDegenerateInput, "fewer than 4 points");
  }
  Box box{points[0], points[0]};
  for (const Vec3& p : points) {
    if (!p.allFinite()) {
      throw Error(ErrorCode::kDegenerateInput, "non-finite point");
    }
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  const double eps = tolerance * box.Diagonal();

  QuickHull qh(points, eps);
  std::vector<Face> faces = qh.Run();
  const std::vector<int> remap = qh.AliveIndexMap();
  for (Face& face : faces) {
    for (int& g : face.nbr) g = remap[g];
  }

  // Merge coplanar neighbors into polygonal facets.
  const int num_faces = static_cast<int>(faces.size());
  std::vector<int> parent(num_faces);
  std::iota(parent.begin(), parent.end(), 0);
  const double cos_merge = std::cos(kFacetMergeAngle);
  for (int f = 0; f < num_faces; ++f) {
    for (int e = 0; e < 3; ++e) {
      const int g = faces[f].nbr[e];
      if (g < f) continue;
      bool coplanar = faces[f].normal.dot(faces[g].normal) >= cos_merge;
      if (!coplanar) {
        // Thin slivers have noisy normals; fall back on vertex distances.
        const int f_apex = faces[f].v[(e + 2) % 3];
        int g_apex = -1;
        for (int k = 0; k < 3; ++k) {
          const int v = faces[g].v[k];
          if (v != faces[f].v[e] && v != faces[f].v[(e + 1) % 3]) g_apex = v;
        }
        coplanar =
            std::abs(faces[g].normal.dot(points[f_apex]) - faces[g].offset) <=
                eps &&
            std::abs(faces[f].normal.dot(points[g_apex]) - faces[f].offset) <=
                eps;
      }
      if (coplanar) {
        const int rf = Find(parent, f);
        const int rg = Find(parent, g);
        if (rf != rg) parent[std::max(rf, rg)] = std::min(rf, rg);
      }
    }
  }

  std::vector<int> group_of(num_faces);
  std::map<int, int> group_index;
  for (int f = 0; f < num_faces; ++f) {
    const int root = Find(parent, f);
    auto it = group_index.find(root);
    if (it == group_index.end()) {
      it = group_index.emplace(root, static_cast<int>(group_index.size())).first;
    }
    group_of[f] = it->second;
  }
  const int num_groups = static_cast<int>(group_index.size());

  struct Group {
    std::map<int, int> next;  // boundary edge from -> to
    std::map<std::pair<int, int>, int> edge_neighbor;
  };
  std::vector<Group> groups(num_groups);
  for (int f = 0; f < num_faces; ++f) {
    for (int e = 0; e < 3; ++e) {
      const int g = faces[f].nbr[e];
      if (group_of[g] == group_of[f]) continue;
      Group& grp = groups[group_of[f]];
      const int from = faces[f].v[e];
      const int to = faces[f].v[(e + 1) % 3];
      if (!grp.next.emplace(from, to).second) {
        throw Error(ErrorCode::kDegenerateInput, "pinched hull facet");
      }
      grp.edge_neighbor[{from, to}] = group_of[g];
    }
  }

  Hull hull;
  hull.points.assign(points.begin(), points.end());
  hull.epsilon = eps;
  hull.facets.resize(num_groups);
  for (int gi = 0; gi < num_groups; ++gi) {
    Group& grp = groups[gi];
    HullFacet& facet = hull.facets[gi];
    if (grp.next.empty()) {
      throw Error(ErrorCode::kDegenerateInput, "hull collapsed to one facet");
    }
    const int start = grp.next.begin()->first;
    int cur = start;
    do {
      facet.vertex_ids.push_back(cur);
      const auto it = grp.next.find(cur);
      if (it == grp.next.end() ||
          facet.vertex_ids.size() > grp.next.size()) {
        throw Error(ErrorCode::kDegenerateInput, "open hull facet loop");
      }
      cur = it->second;
    } while (cur != start);
    if (facet.vertex_ids.size() != grp.next.size()) {
      throw Error(ErrorCode::kDegenerateInput, "facet with a hole");
    }
    for (const auto& [edge, nbr] : grp.edge_neighbor) {
      facet.neighbor_ids.push_back(nbr);
    }
    std::sort(facet.neighbor_ids.begin(), facet.neighbor_ids.end());
    facet.neighbor_ids.erase(
        std::unique(facet.neighbor_ids.begin(), facet.neighbor_ids.end()),
        facet.neighbor_ids.end());
  }

  // A vertex lying on a straight facet edge is not a corner; drop it from
  // every loop it appears in.
  std::vector<char> corner(points.size(), 0);
  for (HullFacet& facet : hull.facets) {
    std::vector<int>& loop = facet.vertex_ids;
    bool changed = true;
    while (changed && loop.size() > 3) {
      changed = false;
      for (size_t i = 0; i < loop.size(); ++i) {
        const int prev = loop[(i + loop.size() - 1) % loop.size()];
        const int next = loop[(i + 1) % loop.size()];
        if (DistanceToLine(points[loop[i]], points[prev], points[next]) <=
            eps) {
          loop.erase(loop.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
    }
    std::rotate(loop.begin(), std::min_element(loop.begin(), loop.end()),
                loop.end());
    const Vec3 n = NewellNormal(points, loop);
    facet.normal = n.normalized();
    double offset = 0;
    for (int v : loop) offset += facet.normal.dot(points[v]);
    facet.offset = offset / static_cast<double>(loop.size());
    for (int v : loop) corner[v] = 1;
  }
  for (size_t i = 0; i < points.size(); ++i) {
    if (corner[i]) hull.hull_vertex_ids.push_back(static_cast<int>(i));
  }
  return hull;
}

int Hull::NumEdges() const {
  int half_edges = 0;
  for (const HullFacet& f : facets) {
    half_edges += static_cast<int>(f.vertex_ids.size());
  }
  return half_edges / 2;
}

double Hull::Volume() const {
  double volume = 0;
  for (const HullFacet& f : facets) {
    const double area = 0.5 * NewellNormal(points, f.vertex_ids).norm();
    volume += area * f.offset / 3.0;
  }
  return volume;
}

PointClass ClassifyPoint(const Hull& hull, const Vec3& p, double tolerance) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const HullFacet& f : hull.facets) {
    worst = std::max(worst, f.normal.dot(p) - f.offset);
  }
  if (worst > tolerance) return PointClass::kOutside;
  if (worst < -tolerance) return PointClass::kStrictlyInside;
  return PointClass::kOnBoundary;
}

}  // namespace cvxfit
