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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cvxfit/error.h"
#include "cvxfit/optimize.h"
#include "cvxfit/render.h"
#include "test_util.h"

namespace {

using namespace cvxfit;
using cvxfit::testing::Cube;
using cvxfit::testing::TetrahedronPlanes;

const Box kRegion{Vec3::Constant(-1), Vec3::Constant(1)};

double SurfaceArea(const Mesh& mesh) {
  double area = 0;
  for (const Tri& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]].position;
    area += 0.5 * (mesh.vertices[t[1]].position - a)
                      .cross(mesh.vertices[t[2]].position - a)
                      .norm();
  }
  return area;
}

// 1 for a ball, smaller for every other solid.
double Sphericity(const Mesh& mesh) {
  const double v = SignedVolume(mesh);
  const double a = SurfaceArea(mesh);
  return 36 * std::numbers::pi * v * v / (a * a * a);
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIoError;
}

std::vector<ParamGradients> ZeroGrads(const Scene& scene) {
  std::vector<ParamGradients> g;
  for (const ConvexPolyhedron& c : scene.convexes) {
    g.push_back(ParamGradients::Zero(c.planes.size()));
  }
  return g;
}

TEST(InitScene, CountsAndPlacement) {
  const Scene scene = InitScene(32, 16, 7, kRegion);
  ASSERT_EQ(scene.convexes.size(), 32u);
  std::vector<int> ids;
  for (const ConvexPolyhedron& c : scene.convexes) {
    EXPECT_EQ(c.planes.size(), 16u);
    ids.push_back(c.id);
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(c.translation[k], -1);
      EXPECT_LE(c.translation[k], 1);
    }
    for (const Hyperplane& p : c.planes) {
      EXPECT_NEAR(p.normal.norm(), 1, 1e-12);
      EXPECT_NEAR(p.offset, 0.15 * kRegion.Diagonal(), 1e-12);
    }
    EXPECT_NO_THROW(IntersectHalfspaces(c.planes));
  }
  std::vector<int> expected(32);
  for (int i = 0; i < 32; ++i) expected[i] = i;
  EXPECT_EQ(ids, expected);
}

TEST(InitScene, AxisAlignedCubes) {
  InitOptions opts;
  opts.axis_aligned = true;
  const Scene scene = InitScene(3, 6, 1, kRegion, opts);
  for (const ConvexPolyhedron& c : scene.convexes) {
    const Mesh mesh = MeshConvex(c);
    const double half = 0.15 * kRegion.Diagonal();
    EXPECT_NEAR(SignedVolume(mesh), 8 * half * half * half, 1e-9);
  }
}

TEST(InitScene, Deterministic) {
  const Scene a = InitScene(5, 8, 42, kRegion);
  const Scene b = InitScene(5, 8, 42, kRegion);
  const Scene c = InitScene(5, 8, 43, kRegion);
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(a.convexes[i].translation, b.convexes[i].translation);
    for (size_t p = 0; p < 8; ++p) {
      EXPECT_EQ(a.convexes[i].planes[p].normal, b.convexes[i].planes[p].normal);
    }
  }
  EXPECT_NE(a.convexes[0].translation, c.convexes[0].translation);
}

TEST(InitScene, Errors) {
  EXPECT_EQ(CodeOf([] { InitScene(0, 8, 0, kRegion); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { InitScene(1, 3, 0, kRegion); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { InitScene(1, 8, 0, Box{}); }), ErrorCode::kInvalidConfig);
  InitOptions opts;
  opts.axis_aligned = true;
  EXPECT_EQ(CodeOf([&] { InitScene(1, 8, 0, kRegion, opts); }), ErrorCode::kInvalidConfig);
  opts = {};
  opts.size_fraction = 0;
  EXPECT_EQ(CodeOf([&] { InitScene(1, 8, 0, kRegion, opts); }), ErrorCode::kInvalidConfig);
}

TEST(OptimizerStep, ZeroGradientsLeaveParameters) {
  Scene scene = InitScene(3, 8, 2, kRegion);
  const Scene before = scene;
  OptimizerState state = OptimizerState::Fresh(scene, {});
  OptimizerStep(scene, state, ZeroGrads(scene));
  EXPECT_EQ(state.step, 1);
  for (size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(scene.convexes[c].translation, before.convexes[c].translation);
    for (size_t p = 0; p < 8; ++p) {
      EXPECT_EQ(scene.convexes[c].planes[p].normal, before.convexes[c].planes[p].normal);
      EXPECT_EQ(scene.convexes[c].planes[p].offset, before.convexes[c].planes[p].offset);
    }
  }
}

TEST(OptimizerStep, FirstStepMovesByLearningRate) {
  Scene scene;
  scene.convexes = {Cube()};
  OptimizerState state = OptimizerState::Fresh(scene, {});
  auto grads = ZeroGrads(scene);
  grads[0].grad_t = Vec3(3, -0.5, 0);
  grads[0].planes[0].grad_b = 2;
  OptimizerStep(scene, state, grads);
  // Bias-corrected Adam moves each coordinate by lr * sign(g) on step one.
  EXPECT_NEAR(scene.convexes[0].translation.x(), -1e-2, 1e-9);
  EXPECT_NEAR(scene.convexes[0].translation.y(), 1e-2, 1e-9);
  EXPECT_EQ(scene.convexes[0].translation.z(), 0);
  EXPECT_NEAR(scene.convexes[0].planes[0].offset, 1 - 1e-3, 1e-9);
  EXPECT_EQ(state.convexes[0].plane_steps, 1);
  EXPECT_EQ(state.convexes[0].translation_steps, 1);
}

TEST(OptimizerStep, ClampsOffsetAndRenormalizes) {
  Scene scene;
  scene.convexes = {Cube()};
  scene.convexes[0].planes[0] = {Vec3(0, 0, 3), 2e-5};
  scene.convexes[0].planes[1] = {Vec3(0, 0, -0.25), 1e-3};
  OptimizerState state = OptimizerState::Fresh(scene, {});
  OptimizerStep(scene, state, ZeroGrads(scene));
  const Hyperplane& p0 = scene.convexes[0].planes[0];
  EXPECT_NEAR(p0.normal.norm(), 1, 1e-15);
  EXPECT_NEAR(p0.offset, 1e-4 / 3, 1e-18);
  const Hyperplane& p1 = scene.convexes[0].planes[1];
  EXPECT_NEAR(p1.normal.norm(), 1, 1e-15);
  EXPECT_NEAR(p1.offset, 4e-3, 1e-15);
  // Inside [0.5, 2] the gauge is left alone.
  scene.convexes[0].planes[2] = {Vec3(1.5, 0, 0), 1};
  OptimizerStep(scene, state, ZeroGrads(scene));
  EXPECT_EQ(scene.convexes[0].planes[2].normal, Vec3(1.5, 0, 0));
}

TEST(OptimizerStep, ClampsTranslationToRegion) {
  Scene scene;
  scene.region = kRegion;
  scene.convexes = {Cube(0.5, Vec3(0.995, 0, -0.995))};
  OptimizerState state = OptimizerState::Fresh(scene, {});
  auto grads = ZeroGrads(scene);
  grads[0].grad_t = Vec3(-1, 1, 1);
  OptimizerStep(scene, state, grads);
  EXPECT_EQ(scene.convexes[0].translation.x(), 1);
  EXPECT_NEAR(scene.convexes[0].translation.y(), -1e-2, 1e-9);
  EXPECT_EQ(scene.convexes[0].translation.z(), -1);
  // Without a region the translation is free.
  scene.region = Box{};
  scene.convexes[0].translation = Vec3(0.995, 0, 0);
  OptimizerStep(scene, state, grads);
  EXPECT_GT(scene.convexes[0].translation.x(), 1);
}

TEST(OptimizerStep, Mismatch) {
  Scene scene = InitScene(2, 8, 2, kRegion);
  OptimizerState state = OptimizerState::Fresh(scene, {});
  auto grads = ZeroGrads(scene);
  grads.pop_back();
  EXPECT_EQ(CodeOf([&] { OptimizerStep(scene, state, grads); }), ErrorCode::kShapeMismatch);
  grads = ZeroGrads(scene);
  grads[1].planes.pop_back();
  EXPECT_EQ(CodeOf([&] { OptimizerStep(scene, state, grads); }), ErrorCode::kShapeMismatch);
}

TEST(PurgeConvexes, RemovesSmallVolumes) {
  Scene scene;
  scene.convexes = {Cube(1, Vec3::Zero(), 10), Cube(0.01, Vec3::Zero(), 11),
                    Cube(0.5, Vec3::Zero(), 12), Cube(0.001, Vec3::Zero(), 13)};
  OptimizerState state = OptimizerState::Fresh(scene, {});
  state.convexes[2].translation_steps = 5;
  const std::vector<int> removed = PurgeConvexes(scene, state, 1e-3);
  EXPECT_EQ(removed, (std::vector<int>{11, 13}));
  ASSERT_EQ(scene.convexes.size(), 2u);
  EXPECT_EQ(scene.convexes[0].id, 10);
  EXPECT_EQ(scene.convexes[1].id, 12);
  ASSERT_EQ(state.convexes.size(), 2u);
  EXPECT_EQ(state.convexes[1].translation_steps, 5);
}

TEST(PurgePlanes, DropsRedundantKeepsShape) {
  Scene scene;
  scene.convexes = {Cube()};
  scene.convexes[0].planes.push_back({Vec3::UnitX(), 5});
  scene.convexes[0].planes.push_back({Vec3(1, 1, 0).normalized(), 3});
  const double volume = SignedVolume(MeshConvex(scene.convexes[0]));
  OptimizerState state = OptimizerState::Fresh(scene, {});
  state.convexes[0].planes[3].m_b = 7;
  EXPECT_EQ(PurgePlanes(scene, state), 2);
  EXPECT_EQ(scene.convexes[0].planes.size(), 6u);
  EXPECT_EQ(state.convexes[0].planes.size(), 6u);
  EXPECT_EQ(state.convexes[0].planes[3].m_b, 7);
  EXPECT_NEAR(SignedVolume(MeshConvex(scene.convexes[0])), volume, 1e-12);
}

TEST(PurgePlanes, KeepsAtLeastFour) {
  Scene scene;
  scene.convexes = {{TetrahedronPlanes(), Vec3::Zero(), 0}};
  OptimizerState state = OptimizerState::Fresh(scene, {});
  EXPECT_EQ(PurgePlanes(scene, state), 0);
  EXPECT_EQ(scene.convexes[0].planes.size(), 4u);
}

TEST(Densify, CubeStaysInsideAndGainsPlanes) {
  const ConvexPolyhedron cube = Cube(1, Vec3(0.3, -0.2, 0.1), 4);
  const ConvexPolyhedron dense = Densify(cube);
  EXPECT_EQ(dense.id, 4);
  EXPECT_EQ(dense.translation, cube.translation);
  EXPECT_GT(dense.planes.size(), 6u);
  const Mesh mesh = MeshConvex(dense);
  for (const MeshVertex& v : mesh.vertices) {
    const Vec3 local = v.position - cube.translation;
    for (const Hyperplane& p : cube.planes) EXPECT_LE(p.normal.dot(local), p.offset + 1e-9);
  }
  EXPECT_LE(SignedVolume(mesh), 8 + 1e-9);
}

TEST(Densify, TetrahedronRounds) {
  ConvexPolyhedron poly{TetrahedronPlanes(), Vec3::Zero(), 0};
  double sphericity = Sphericity(MeshConvex(poly));
  double volume = SignedVolume(MeshConvex(poly));
  for (int round = 0; round < 2; ++round) {
    poly = Densify(poly);
    const Mesh mesh = MeshConvex(poly);
    EXPECT_GT(Sphericity(mesh), sphericity);
    EXPECT_LE(SignedVolume(mesh), volume + 1e-12);
    sphericity = Sphericity(mesh);
    volume = SignedVolume(mesh);
  }
}

TEST(DensifyAll, RespectsPlaneCap) {
  Scene scene;
  scene.convexes = {Cube(), Cube(0.5)};
  OptimizerState state = OptimizerState::Fresh(scene, {});
  state.convexes[0].plane_steps = 9;
  EXPECT_EQ(DensifyAll(scene, state, 6), 0);
  EXPECT_EQ(scene.convexes[0].planes.size(), 6u);
  EXPECT_EQ(DensifyAll(scene, state), 2);
  EXPECT_GT(scene.convexes[0].planes.size(), 6u);
  EXPECT_EQ(state.convexes[0].planes.size(), scene.convexes[0].planes.size());
  EXPECT_EQ(state.convexes[0].plane_steps, 0);
}

TEST(Spawn, RestoresCountDeterministically) {
  Scene a = InitScene(4, 8, 3, kRegion);
  OptimizerState sa = OptimizerState::Fresh(a, {});
  EXPECT_EQ(Spawn(a, sa, 4, 99), 0);
  a.convexes.erase(a.convexes.begin() + 1);
  sa.convexes.erase(sa.convexes.begin() + 1);
  Scene b = a;
  OptimizerState sb = sa;
  EXPECT_EQ(Spawn(a, sa, 6, 99), 3);
  EXPECT_EQ(Spawn(b, sb, 6, 99), 3);
  ASSERT_EQ(a.convexes.size(), 6u);
  EXPECT_EQ(sa.convexes.size(), 6u);
  for (size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a.convexes[i].translation, b.convexes[i].translation);
    EXPECT_EQ(a.convexes[i].id, b.convexes[i].id);
  }
  EXPECT_EQ(a.convexes.back().id, 6);
  for (size_t i = 3; i < 6; ++i) {
    EXPECT_TRUE((a.convexes[i].translation.array().abs() <= 1).all());
  }
}

TEST(Respawn, ReplacesInPlace) {
  Scene scene = InitScene(3, 8, 3, kRegion);
  OptimizerState state = OptimizerState::Fresh(scene, {});
  state.convexes[1].translation_steps = 4;
  const Vec3 old = scene.convexes[1].translation;
  Respawn(scene, state, 1, 5);
  EXPECT_NE(scene.convexes[1].translation, old);
  EXPECT_EQ(scene.convexes[1].id, 3);
  EXPECT_EQ(state.convexes[1].translation_steps, 0);
}

TEST(Schedule, MakeSpacesEvents) {
  const Schedule s = Schedule::Make(20000, 10, 0.8);
  ASSERT_EQ(s.event_steps.size(), 10u);
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(s.event_steps[k - 1], 1600 * k);
  EXPECT_TRUE(s.IsEvent(1600));
  EXPECT_FALSE(s.IsEvent(1601));
  EXPECT_TRUE(Schedule::Make(100, 0, 0.8).event_steps.empty());
  EXPECT_NO_THROW(s.Validate());
}

TEST(Schedule, SigmaDecaysGeometrically) {
  const Schedule s = Schedule::Make(101, 0, 0.8);
  EXPECT_EQ(s.SigmaAt(0), 1.0);
  EXPECT_NEAR(s.SigmaAt(100), 0.0625, 1e-15);
  EXPECT_NEAR(s.SigmaAt(50), 0.25, 1e-15);
  for (int i = 1; i <= 100; ++i) EXPECT_LT(s.SigmaAt(i), s.SigmaAt(i - 1));
}

TEST(Schedule, ValidateRejects) {
  Schedule s = Schedule::Make(100, 2, 0.8);
  s.event_steps.push_back(100);
  EXPECT_EQ(CodeOf([&] { s.Validate(); }), ErrorCode::kInvalidConfig);
  s = Schedule::Make(100, 2, 0.8);
  s.sigma_end = 0;
  EXPECT_EQ(CodeOf([&] { s.Validate(); }), ErrorCode::kInvalidConfig);
  s = Schedule::Make(100, 2, 0.8);
  s.purge_every = -1;
  EXPECT_EQ(CodeOf([&] { s.Validate(); }), ErrorCode::kInvalidConfig);
}

std::vector<RenderTarget> CubeTargets(int size) {
  const std::vector<Mesh> truth = {MeshConvex(Cube(0.5))};
  std::vector<RenderTarget> targets;
  for (const Vec3& pos : {Vec3(2.5, 0.5, 0.3), Vec3(-0.4, 2.5, 0.6), Vec3(0.2, -0.7, 2.5),
                          Vec3(-2.2, -0.9, -1.0)}) {
    Camera cam;
    cam.position = pos;
    cam.width = cam.height = size;
    targets.push_back({cam, RasterHard(truth, cam).silhouette});
  }
  return targets;
}

TEST(Fit, ZeroStepsIsIdentity) {
  const Scene scene = InitScene(2, 8, 1, kRegion);
  FitOptions opts;
  opts.schedule = Schedule::Make(0, 0, 0.8);
  const auto targets = CubeTargets(32);
  const FitResult r = Fit(scene, targets, opts);
  ASSERT_EQ(r.scene.convexes.size(), 2u);
  EXPECT_EQ(r.scene.convexes[0].translation, scene.convexes[0].translation);
  EXPECT_TRUE(r.loss_history.empty());
}

TEST(Fit, Errors) {
  const Scene scene = InitScene(1, 8, 1, kRegion);
  FitOptions opts;
  opts.schedule = Schedule::Make(10, 0, 0.8);
  EXPECT_EQ(CodeOf([&] { Fit(scene, {}, opts); }), ErrorCode::kInvalidConfig);
  auto targets = CubeTargets(32);
  targets[0].silhouette = Image(16, 16);
  EXPECT_EQ(CodeOf([&] { Fit(scene, targets, opts); }), ErrorCode::kShapeMismatch);
}

TEST(Fit, DeterministicAndDecreasing) {
  Scene scene;
  scene.region = kRegion;
  scene.convexes = {Cube(0.35, Vec3(0.15, -0.1, 0.1))};
  scene.next_id = 1;
  FitOptions opts;
  opts.schedule = Schedule::Make(120, 2, 0.8);
  opts.schedule.purge_every = 50;
  opts.target_convex_count = 1;
  opts.densify = false;
  opts.adam.lr_plane = 1e-2;
  const auto targets = CubeTargets(48);
  int snapshots = 0;
  FitCallbacks cb;
  cb.snapshot_every = 40;
  cb.on_snapshot = [&](int, const Scene&) { ++snapshots; };
  const FitResult a = Fit(scene, targets, opts, cb);
  const FitResult b = Fit(scene, targets, opts);
  ASSERT_EQ(a.loss_history.size(), 120u);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(snapshots, 4);
  double head = 0, tail = 0;
  for (int i = 0; i < 10; ++i) {
    head += a.loss_history[i];
    tail += a.loss_history[110 + i];
  }
  EXPECT_LT(tail, 0.2 * head);
}

}  // namespace
