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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Optional arguments select criteria by
// number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvxfit/config.h"
#include "cvxfit/cvx_io.h"
#include "cvxfit/diffgeom.h"
#include "cvxfit/error.h"
#include "cvxfit/metrics.h"
#include "cvxfit/optimize.h"
#include "cvxfit/render.h"
#include "cvxfit/views.h"
#include "oracles.h"
#include "test_util.h"

namespace {

using namespace cvxfit;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

ConvexPolyhedron Box3(const Vec3& center, const Vec3& half, int id = 0) {
  ConvexPolyhedron c;
  c.id = id;
  c.translation = center;
  for (int k = 0; k < 3; ++k) {
    c.planes.push_back({Vec3::Unit(k), half[k]});
    c.planes.push_back({-Vec3::Unit(k), half[k]});
  }
  return c;
}

// Circumscribed polytope of the unit sphere with `n` tangent planes.
ConvexPolyhedron Sphere(int n) {
  ConvexPolyhedron c;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - y * y);
    c.planes.push_back({Vec3(r * std::cos(golden * i), y, r * std::sin(golden * i)), 1.0});
  }
  return c;
}

bool StrictlyInside(const ConvexPolyhedron& c, const Vec3& p) {
  for (const Hyperplane& h : c.planes) {
    if (!(h.normal.dot(p - c.translation) < h.offset - 1e-9)) return false;
  }
  return true;
}

// Samples the boundary of the union: points strictly inside another convex
// are dropped.
SampledSurface UnionSurface(const std::vector<ConvexPolyhedron>& convexes, uint64_t seed) {
  std::vector<Mesh> meshes;
  for (const ConvexPolyhedron& c : convexes) meshes.push_back(MeshConvex(c));
  std::vector<int> owner;
  for (size_t m = 0; m < meshes.size(); ++m) {
    owner.insert(owner.end(), meshes[m].triangles.size(), static_cast<int>(m));
  }
  const SampledSurface all = SampleSurface(meshes, kDefaultSampleCount, seed);
  SampledSurface out;
  for (size_t i = 0; i < all.size(); ++i) {
    const int m = owner[all.triangles[i]];
    bool hidden = false;
    for (size_t j = 0; j < convexes.size() && !hidden; ++j) {
      hidden = static_cast<int>(j) != m && StrictlyInside(convexes[j], all.points[i]);
    }
    if (hidden) continue;
    out.points.push_back(all.points[i]);
    out.normals.push_back(all.normals[i]);
    out.triangles.push_back(all.triangles[i]);
  }
  return out;
}

double ChamferL2(const std::vector<ConvexPolyhedron>& fit, const SampledSurface& truth) {
  return Chamfer(UnionSurface(fit, 2), truth, 2);
}

std::vector<RenderTarget> Targets(const std::vector<ConvexPolyhedron>& truth, int views,
                                  int size) {
  std::vector<Mesh> meshes;
  for (const ConvexPolyhedron& c : truth) meshes.push_back(MeshConvex(c));
  return GenerateViews(meshes, views, size, size, 0);
}

Outcome DualityOracle() {
  const auto start = Clock::now();
  Rng rng(101);
  int matched = 0;
  const int instances = 200;
  for (int i = 0; i < instances; ++i) {
    const int n = 8 + static_cast<int>(rng.Index(33));
    const std::vector<Hyperplane> planes = cvxfit::testing::RandomPlanes(rng, n);
    const PolytopeTopology topo = IntersectHalfspaces(planes);
    const std::vector<Vec3> got = cvxfit::testing::Positions(topo);
    const std::vector<Vec3> want = oracle::HalfspaceVertices(planes);
    matched += oracle::SameVertexSet(got, want, 1e-6);
  }
  const double secs = Seconds(start);
  return {matched == instances && secs < 10,
          Fmt("%d/%d instances match, %.2f s", matched, instances, secs)};
}

Outcome VertexJacobianCheck() {
  Rng rng(202);
  int checked = 0;
  double worst = 0;
  while (checked < 100) {
    std::array<Hyperplane, 3> p;
    Mat3 a;
    for (int k = 0; k < 3; ++k) {
      p[k] = {rng.UnitVector() * rng.Uniform(0.5, 2), rng.Uniform(0.2, 2)};
      a.row(k) = p[k].normal.transpose();
    }
    const Eigen::JacobiSVD<Mat3> svd(a);
    if (svd.singularValues()(0) / svd.singularValues()(2) > 10) continue;
    ++checked;
    const Vec3 x = SolveVertex(p[0], p[1], p[2]);
    const cvxfit::VertexJacobian jac = ComputeVertexJacobian(p[0], p[1], p[2], x);
    const double h = 1e-5;
    auto column = [&](int plane, int coord) {
      // coord 3 is the offset, 0..2 the normal.
      auto solve = [&](double delta) {
        std::array<Hyperplane, 3> q = p;
        if (coord == 3) {
          q[plane].offset += delta;
        } else {
          q[plane].normal[coord] += delta;
        }
        return SolveVertex(q[0], q[1], q[2]);
      };
      return Vec3((solve(h) - solve(-h)) / (2 * h));
    };
    for (int plane = 0; plane < 3; ++plane) {
      for (int coord = 0; coord < 4; ++coord) {
        const Vec3 an = coord == 3 ? Vec3(jac.d_x_d_b.col(plane))
                                   : Vec3(jac.d_x_d_a[plane].col(coord));
        const Vec3 fd = column(plane, coord);
        worst = std::max(worst, (fd - an).norm() / std::max(an.norm(), 1e-12));
      }
    }
  }
  return {worst < 1e-5, Fmt("100 triples x 12 partials, worst relative error %.2e", worst)};
}

Outcome EndToEndGradient() {
  Rng rng(303);
  ConvexPolyhedron poly{cvxfit::testing::RandomPlanes(rng, 12, 0.6, 1.2), Vec3(0.1, -0.05, 0.08),
                        0};
  const PolytopeTopology topo = IntersectHalfspaces(poly.planes);
  const auto targets = Targets({Box3(Vec3::Zero(), Vec3(0.8, 0.6, 0.7))}, 3, 128);
  const SoftRasterConfig cfg{1.0};

  auto loss_of = [&](const ConvexPolyhedron& p) {
    const PolytopeTopology moved = ResolvePositions(topo, p.planes);
    const std::vector<Mesh> meshes = {BuildMesh(p, moved)};
    double loss = 0;
    for (const RenderTarget& t : targets) {
      loss += ImageL1(RasterSoft(meshes, t.camera, cfg), t.silhouette).loss;
    }
    return loss / static_cast<double>(targets.size());
  };

  const std::vector<Mesh> meshes = {BuildMesh(poly, topo)};
  std::vector<Vec3> vertex_grads(meshes[0].vertices.size(), Vec3::Zero());
  for (const RenderTarget& t : targets) {
    const SoftRasterizer raster(meshes, t.camera, cfg);
    const L1Result l1 = ImageL1(raster.silhouette(), t.silhouette);
    const auto g = raster.Backward(l1.grads);
    for (size_t v = 0; v < vertex_grads.size(); ++v) {
      vertex_grads[v] += g[0][v] / static_cast<double>(targets.size());
    }
  }
  const ParamGradients grads = BackpropVertices(topo, poly, vertex_grads);

  const size_t np = poly.planes.size();
  double worst = 0, worst_fine = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> dir(4 * np + 3);
    double norm = 0;
    for (double& d : dir) {
      d = rng.Uniform(-1, 1);
      norm += d * d;
    }
    for (double& d : dir) d /= std::sqrt(norm);
    double an = 0;
    for (size_t i = 0; i < np; ++i) {
      for (int k = 0; k < 3; ++k) an += grads.planes[i].grad_a[k] * dir[4 * i + k];
      an += grads.planes[i].grad_b * dir[4 * i + 3];
    }
    for (int k = 0; k < 3; ++k) an += grads.grad_t[k] * dir[4 * np + k];
    auto shifted = [&](double h) {
      ConvexPolyhedron p = poly;
      for (size_t i = 0; i < np; ++i) {
        for (int k = 0; k < 3; ++k) p.planes[i].normal[k] += h * dir[4 * i + k];
        p.planes[i].offset += h * dir[4 * i + 3];
      }
      for (int k = 0; k < 3; ++k) p.translation[k] += h * dir[4 * np + k];
      return p;
    };
    const double h = 1e-4;
    const double fd = (loss_of(shifted(h)) - loss_of(shifted(-h))) / (2 * h);
    worst = std::max(worst, std::abs(fd - an) / std::abs(fd));
    // Diagnostic only: a step too small to straddle the kinks of the
    // boundary distance inside a triangle.
    const double tiny = 1e-6;
    const double fine = (loss_of(shifted(tiny)) - loss_of(shifted(-tiny))) / (2 * tiny);
    worst_fine = std::max(worst_fine, std::abs(fine - an) / std::abs(fine));
  }
  return {worst < 1e-2, Fmt("20 directions, 3 views at 128^2, worst relative error %.2e at "
                            "h=1e-4 (%.2e at h=1e-6)",
                            worst, worst_fine)};
}

Outcome CubeRecovery() {
  const auto start = Clock::now();
  const ConvexPolyhedron cube = Box3(Vec3::Zero(), Vec3::Constant(1));
  const auto targets = Targets({cube}, 16, 256);
  FitConfig config;
  config.total_steps = 2000;
  config.options.densify = false;
  FitOptions options = config.Resolved();
  options.target_convex_count = 1;
  InitOptions init;
  init.size_fraction = config.initial_size;
  const Scene scene = InitScene(1, 8, 0, RegionFromViews(targets), init);
  const FitResult result = Fit(scene, targets, options);
  const double secs = Seconds(start);
  const double chamfer = ChamferL2(result.scene.convexes, UnionSurface({cube}, 1));
  return {chamfer < 1e-3 && secs < 120,
          Fmt("Chamfer-L2 %.3e after 2000 steps, final loss %.4f, %.1f s", chamfer,
              result.loss_history.back(), secs)};
}

Outcome Densification() {
  const ConvexPolyhedron sphere = Sphere(2000);
  const SampledSurface truth = UnionSurface({sphere}, 1);
  const auto targets = Targets({sphere}, 16, 128);
  FitOptions options;
  options.schedule = Schedule::Make(1500, 0, 0.8);
  options.schedule.event_steps = {500, 1000};
  options.target_convex_count = 1;
  // Uncapped, so that both events really densify.
  options.max_planes = 0;
  InitOptions init;
  const Scene scene = InitScene(1, 16, 0, RegionFromViews(targets), init);
  int densified = 0;
  std::vector<double> chamfer;
  std::vector<size_t> planes;
  FitCallbacks callbacks;
  callbacks.snapshot_every = 500;
  callbacks.on_snapshot = [&](int step, const Scene& s) {
    if (step == 0) return;
    chamfer.push_back(ChamferL2(s.convexes, truth));
    planes.push_back(s.convexes.at(0).planes.size());
  };
  callbacks.on_event = [&](int, const std::string& message) {
    densified += message == "densified 1 convexes";
  };
  Fit(scene, targets, options, callbacks);
  if (chamfer.size() != 3) return {false, "missing snapshots"};
  const double first = 1 - chamfer[1] / chamfer[0];
  const double second = 1 - chamfer[2] / chamfer[1];
  return {densified == 2 && first >= 0.1 && second >= 0.1,
          Fmt("%d events densified; Chamfer-L2 %.3e (%zu planes) -> %.3e (%zu) -> "
              "%.3e (%zu); reductions %.0f%%, %.0f%%",
              densified, chamfer[0], planes[0], chamfer[1], planes[1], chamfer[2], planes[2],
              100 * first, 100 * second)};
}

Outcome ConvexCountTrend() {
  const std::vector<ConvexPolyhedron> shape = {
      Box3(Vec3(0, -0.5, 0), Vec3(1, 0.5, 0.5), 0),
      Box3(Vec3(-0.5, 0, 0), Vec3(0.5, 1, 0.5), 1)};
  const SampledSurface truth = UnionSurface(shape, 1);
  const auto targets = Targets(shape, 16, 128);
  auto run = [&](int count) {
    FitConfig config;
    config.total_steps = 2000;
    config.options.densify = false;
    FitOptions options = config.Resolved();
    options.target_convex_count = count;
    InitOptions init;
    const Scene scene = InitScene(count, 16, 0, RegionFromViews(targets), init);
    return ChamferL2(Fit(scene, targets, options).scene.convexes, truth);
  };
  const double two = run(2);
  const double eight = run(8);
  return {eight <= two, Fmt("Chamfer-L2 with 2 convexes %.3e, with 8 convexes %.3e", two, eight)};
}

Outcome GaugeInvariance() {
  Rng rng(707);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexPolyhedron poly{cvxfit::testing::RandomPlanes(rng, 6 + trial), Vec3::Zero(), 0};
    const Mesh base = MeshConvex(poly);
    for (size_t i = 0; i < poly.planes.size(); ++i) {
      for (double s : {0.5, 2.0, 10.0}) {
        ConvexPolyhedron scaled = poly;
        scaled.planes[i].normal *= s;
        scaled.planes[i].offset *= s;
        const Mesh mesh = MeshConvex(scaled);
        if (mesh.vertices.size() != base.vertices.size()) return {false, "vertex count changed"};
        for (const MeshVertex& v : base.vertices) {
          double best = 1e300;
          for (const MeshVertex& w : mesh.vertices) {
            best = std::min(best, (v.position - w.position).norm());
          }
          worst = std::max(worst, best);
        }
      }
    }
  }
  return {worst <= 1e-9, Fmt("max vertex displacement %.2e", worst)};
}

Outcome PlanePurge() {
  std::vector<Hyperplane> planes = cvxfit::testing::CubePlanes();
  planes.push_back({Vec3(1, 1, 1).normalized(), 2.0});
  const std::vector<int> flagged = RedundantPlanes(planes);
  if (flagged != std::vector<int>{6}) return {false, "cube plus redundant plane misflagged"};

  Rng rng(808);
  int identical = 0, removed = 0;
  const int scenes = 10;
  for (int trial = 0; trial < scenes; ++trial) {
    Scene scene;
    for (int c = 0; c < 3; ++c) {
      ConvexPolyhedron poly{cvxfit::testing::RandomPlanes(rng, 10, 0.3, 0.6),
                            rng.InBox({Vec3::Constant(-0.5), Vec3::Constant(0.5)}), c};
      for (int k = 0; k < 3; ++k) poly.planes.push_back({rng.UnitVector(), 5.0});
      scene.convexes.push_back(poly);
    }
    OptimizerState state = OptimizerState::Fresh(scene, {});
    Camera camera;
    camera.position = rng.UnitVector() * 4;
    camera.width = camera.height = 128;
    const Image before = RasterHard(SceneMeshes(scene), camera).silhouette;
    removed += PurgePlanes(scene, state);
    const Image after = RasterHard(SceneMeshes(scene), camera).silhouette;
    identical += before.values == after.values;
  }
  return {identical == scenes,
          Fmt("exact flag on cube; %d/%d silhouettes identical after purging %d planes",
              identical, scenes, removed)};
}

Outcome LoopCounts() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [name, poly] :
       std::vector<std::pair<std::string, ConvexPolyhedron>>{
           {"cube", cvxfit::testing::Cube()},
           {"tetrahedron", {cvxfit::testing::TetrahedronPlanes(), Vec3::Zero(), 0}}}) {
    const Mesh mesh = MeshConvex(poly);
    const size_t v = mesh.vertices.size(), f = mesh.triangles.size(), e = 3 * f / 2;
    const Mesh sub = LoopSubdivide(mesh);
    ok = ok && sub.vertices.size() == v + e && sub.triangles.size() == 4 * f;
    detail << name << " V " << v << "->" << sub.vertices.size() << " F " << f << "->"
           << sub.triangles.size() << "; ";
  }
  return {ok, detail.str()};
}

Outcome CvxConformance() {
  const std::string two_cubes =
      "p  0  0  1  1\np  0  0 -1  1\np  0  1  0  1\np  0 -1  0  1\np  1  0  0  1\n"
      "p -1  0  0  1\np  0  0  1  1\np  0  0 -1  1\np  0  1  0  1\np  0 -1  0  1\n"
      "p  1  0  0  1\np -1  0  0  1\nc  0  1  2  3  4  5\nc  6  7  8  9 10 11 \n"
      "t  0.0  0.0  0.0\nt  4.0  0.0  0.0\n";
  const auto convexes = ConvexesFromDocument(ParseCvx(two_cubes));
  if (convexes.size() != 2) return {false, "expected two convexes"};
  const double v0 = SignedVolume(MeshConvex(convexes[0]));
  const double v1 = SignedVolume(MeshConvex(convexes[1]));
  const double gap = (convexes[1].translation - convexes[0].translation).norm();
  bool ok = std::abs(v0 - 8) < 1e-12 && std::abs(v1 - 8) < 1e-12 && std::abs(gap - 4) < 1e-12;

  Rng rng(1010);
  int lossless = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CvxDocument doc;
    const int np = 4 + static_cast<int>(rng.Index(20));
    for (int i = 0; i < np; ++i) {
      doc.planes.push_back({rng.UnitVector() * rng.Uniform(0.5, 2), rng.Uniform(1e-4, 3)});
    }
    for (int c = 0; c < 1 + static_cast<int>(rng.Index(4)); ++c) {
      std::vector<int> ids;
      for (int k = 0; k < 4; ++k) ids.push_back(static_cast<int>(rng.Index(np)));
      doc.convexes.push_back(ids);
      doc.translations.push_back(rng.InBox({Vec3::Constant(-5), Vec3::Constant(5)}));
    }
    lossless += ParseCvx(WriteCvx(doc)) == doc;
  }
  ok = ok && lossless == 100;
  return {ok, Fmt("volumes %.3f %.3f, centers %.3f apart, %d/100 round-trips lossless", v0, v1,
                  gap, lossless)};
}

Outcome RendererConsistency() {
  const std::vector<Mesh> cube = {MeshConvex(cvxfit::testing::Cube())};
  Camera camera;
  camera.position = Vec3(3.0, 2.0, 2.5);
  camera.width = camera.height = 256;
  const Image soft = RasterSoft(cube, camera, {0.25});
  const Image hard = RasterHard(cube, camera).silhouette;
  double mean = 0;
  for (size_t i = 0; i < soft.size(); ++i) mean += std::abs(soft.values[i] - hard.values[i]);
  mean /= static_cast<double>(soft.size());

  const std::vector<Mesh> scene = {MeshConvex(cvxfit::testing::Cube(0.6, Vec3(0.4, 0.1, 0.3))),
                                   MeshConvex(cvxfit::testing::Cube(0.5, Vec3(-0.5, -0.2, -0.9)))};
  int mismatched = 0;
  for (const Vec3& pos : {Vec3(2.3, 1.7, 4.1), Vec3(-1.9, 0.7, 3.3), Vec3(0.4, -3.1, 2.2)}) {
    Camera cam;
    cam.position = pos;
    cam.width = cam.height = 64;
    const Image raster = RasterHard(scene, cam).silhouette;
    const Image rays = oracle::RayCastMeshes(scene, cam).silhouette;
    for (size_t i = 0; i < raster.size(); ++i) mismatched += raster.values[i] != rays.values[i];
  }
  return {mean < 0.02 && mismatched == 0,
          Fmt("mean |soft - hard| %.4f at sigma 0.25; %d ray-cast mismatches at 64^2", mean,
              mismatched)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"duality-oracle", DualityOracle},
      {"vertex-jacobian", VertexJacobianCheck},
      {"end-to-end-gradient", EndToEndGradient},
      {"cube-recovery", CubeRecovery},
      {"densification", Densification},
      {"convex-count-trend", ConvexCountTrend},
      {"gauge-invariance", GaugeInvariance},
      {"plane-purge", PlanePurge},
      {"loop-subdivision", LoopCounts},
      {"cvx-conformance", CvxConformance},
      {"renderer-consistency", RendererConsistency},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s %d %s: %s\n", outcome.pass ? "PASS" : "FAIL", number,
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
