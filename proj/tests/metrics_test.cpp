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

#include <cmath>

#include <gtest/gtest.h>

#include "cvxfit/error.h"
#include "cvxfit/metrics.h"
#include "oracles.h"
#include "test_util.h"

namespace {

using namespace cvxfit;
using cvxfit::testing::Cube;

// Unit square in z = 0 split into triangles of area 1/4 and 3/4.
Mesh UnevenSquare() {
  Mesh mesh;
  for (const Vec3& p : {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0),
                        Vec3(0.5, 0, 0)}) {
    mesh.vertices.push_back({p});
  }
  // Triangle 0: (0,0) (0.5,0) (0,1), area 1/4. Triangle 1: the rest.
  mesh.triangles = {{0, 4, 3}, {4, 1, 2}, {4, 2, 3}};
  return mesh;
}

SampledSurface Points(std::vector<Vec3> points, const Vec3& normal = Vec3::UnitZ()) {
  SampledSurface s;
  s.normals.assign(points.size(), normal);
  s.triangles.assign(points.size(), 0);
  s.points = std::move(points);
  return s;
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

TEST(SampleSurface, AreaWeightedCounts) {
  const int n = 100000;
  const SampledSurface s = SampleSurface(UnevenSquare(), n, 1);
  ASSERT_EQ(s.size(), static_cast<size_t>(n));
  int first = 0, left = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    first += s.triangles[i] == 0;
    left += s.points[i].x() < 0.3;
  }
  // Binomial counts stay within 3 standard deviations of n * p.
  auto within = [n](int count, double p) {
    return std::abs(count - n * p) < 3 * std::sqrt(n * p * (1 - p));
  };
  EXPECT_TRUE(within(first, 0.25)) << first;
  EXPECT_TRUE(within(left, 0.3)) << left;
}

TEST(SampleSurface, PointsLieOnSurface) {
  const std::vector<Mesh> meshes = {MeshConvex(Cube(0.5, Vec3(1, 0, 0))),
                                    MeshConvex(Cube(0.25, Vec3(-1, 0, 0), 1))};
  const SampledSurface s = SampleSurface(meshes, 5000, 3);
  for (size_t i = 0; i < s.size(); ++i) {
    const Vec3& p = s.points[i];
    const Vec3 local = p.x() > 0 ? Vec3(p - Vec3(1, 0, 0)) : Vec3(p + Vec3(1, 0, 0));
    const double half = p.x() > 0 ? 0.5 : 0.25;
    EXPECT_NEAR(local.cwiseAbs().maxCoeff(), half, 1e-12);
    EXPECT_NEAR(s.normals[i].norm(), 1, 1e-12);
    // The normal points along the axis of the face the point lies on.
    int axis;
    local.cwiseAbs().maxCoeff(&axis);
    EXPECT_NEAR(std::abs(s.normals[i][axis]), 1, 1e-12);
    EXPECT_GT(s.normals[i].dot(local), 0);
  }
}

TEST(SampleSurface, DeterministicAndEmpty) {
  const Mesh cube = MeshConvex(Cube());
  EXPECT_EQ(SampleSurface(cube, 100, 5).points, SampleSurface(cube, 100, 5).points);
  EXPECT_NE(SampleSurface(cube, 100, 5).points, SampleSurface(cube, 100, 6).points);
  EXPECT_EQ(SampleSurface(cube, 0, 5).size(), 0u);
  EXPECT_EQ(CodeOf([] { SampleSurface(Mesh{}, 10, 0); }), ErrorCode::kEmptyMesh);
}

TEST(NearestNeighbors, MatchesBruteForce) {
  Rng rng(11);
  std::vector<Vec3> refs, queries;
  for (int i = 0; i < 500; ++i) refs.push_back(rng.InBox({Vec3::Zero(), Vec3(1, 2, 0.5)}));
  for (int i = 0; i < 300; ++i) queries.push_back(rng.InBox({Vec3::Constant(-1), Vec3(2, 3, 1.5)}));
  // Exact duplicates exercise the lowest-index tie rule.
  refs.push_back(refs[17]);
  queries.push_back(refs[17]);
  const auto grid = NearestNeighbors(queries, refs);
  const auto brute = oracle::BruteNearest(queries, refs);
  for (size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(grid[i].index, brute[i].index);
    EXPECT_EQ(grid[i].distance_sq, brute[i].distance_sq);
  }
  EXPECT_EQ(grid.back().index, 17);
}

TEST(NearestNeighbors, PlanarAndSingleton) {
  Rng rng(12);
  std::vector<Vec3> refs, queries;
  for (int i = 0; i < 400; ++i) refs.push_back(Vec3(rng.Uniform(), rng.Uniform(), 0));
  for (int i = 0; i < 100; ++i) queries.push_back(rng.InBox({Vec3::Constant(-1), Vec3::Constant(2)}));
  const auto grid = NearestNeighbors(queries, refs);
  const auto brute = oracle::BruteNearest(queries, refs);
  for (size_t i = 0; i < queries.size(); ++i) EXPECT_EQ(grid[i].index, brute[i].index);
  const std::vector<Vec3> one = {Vec3(1, 2, 3)};
  const auto single = NearestNeighbors(queries, one);
  for (size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(single[i].index, 0);
    EXPECT_EQ(single[i].distance_sq, (queries[i] - one[0]).squaredNorm());
  }
}

TEST(Chamfer, Examples) {
  const SampledSurface a = Points({Vec3(0, 0, 0)});
  const SampledSurface b = Points({Vec3(3, 4, 0)});
  EXPECT_EQ(Chamfer(a, a, 1), 0);
  EXPECT_EQ(Chamfer(a, b, 1), 10);
  EXPECT_EQ(Chamfer(a, b, 2), 50);
  // a -> b mean 0, b -> a mean 5 / 2.
  const SampledSurface c = Points({Vec3(0, 0, 0), Vec3(3, 4, 0)});
  EXPECT_EQ(Chamfer(a, c, 1), 2.5);
  EXPECT_EQ(Chamfer(c, a, 1), 2.5);
}

TEST(Chamfer, SymmetricAndScales) {
  const Mesh cube = MeshConvex(Cube());
  const Mesh shifted = MeshConvex(Cube(0.8, Vec3(0.1, 0.2, 0)));
  const SampledSurface a = SampleSurface(cube, 3000, 1);
  const SampledSurface b = SampleSurface(shifted, 2000, 2);
  for (int order : {1, 2}) {
    EXPECT_NEAR(Chamfer(a, b, order), Chamfer(b, a, order), 1e-12);
    SampledSurface sa = a, sb = b;
    for (Vec3& p : sa.points) p *= 3;
    for (Vec3& p : sb.points) p *= 3;
    EXPECT_NEAR(Chamfer(sa, sb, order), std::pow(3.0, order) * Chamfer(a, b, order),
                1e-10 * Chamfer(sa, sb, order));
  }
  EXPECT_EQ(Chamfer(a, a, 2), 0);
}

TEST(Chamfer, Errors) {
  const SampledSurface a = Points({Vec3::Zero()});
  EXPECT_EQ(CodeOf([&] { Chamfer(a, SampledSurface{}, 1); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(CodeOf([&] { Chamfer(a, a, 3); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { NormalConsistency(SampledSurface{}, a); }), ErrorCode::kEmptyInput);
}

TEST(NormalConsistency, Examples) {
  const SampledSurface s = SampleSurface(MeshConvex(Cube()), 2000, 4);
  EXPECT_NEAR(NormalConsistency(s, s), 1, 1e-12);
  const SampledSurface up = Points({Vec3(0, 0, 0), Vec3(1, 0, 0)}, Vec3::UnitZ());
  const SampledSurface down = Points({Vec3(0, 0.1, 0)}, -Vec3::UnitZ());
  const SampledSurface side = Points({Vec3(0, 0.1, 0)}, Vec3::UnitX());
  EXPECT_EQ(NormalConsistency(up, down), 1);
  EXPECT_EQ(NormalConsistency(up, side), 0);
  SampledSurface mixed = Points({Vec3(0, 0, 0), Vec3(5, 0, 0)});
  mixed.normals[1] = Vec3::UnitX();
  // mixed -> up: 1 and 0; up -> mixed: 1 and 1 (nearest of (1,0,0) is (0,0,0)).
  EXPECT_DOUBLE_EQ(NormalConsistency(mixed, up), 0.5 * (0.5 + 1.0));
}

}  // namespace
