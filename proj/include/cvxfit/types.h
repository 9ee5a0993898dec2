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

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cvxfit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Point3 = Vec3;
using Tri = std::array<int, 3>;

/// Axis-aligned box in scene units.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 Size() const { return max - min; }
  Vec3 Center() const { return 0.5 * (min + max); }
  double Diagonal() const { return Size().norm(); }
  double Volume() const {
    const Vec3 s = Size();
    return s.x() * s.y() * s.z();
  }
};

}  // namespace cvxfit
