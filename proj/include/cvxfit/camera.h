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

#include <Eigen/Core>

#include "cvxfit/types.h"

namespace cvxfit {

/// Pinhole camera. Pixel (0, 0) is the top-left corner of the image and
/// pixel centers sit at half-integer coordinates.
struct Camera {
  Vec3 position = Vec3(0, 0, 5);
  Vec3 look_at = Vec3::Zero();
  Vec3 up = Vec3::UnitY();
  double fov_y = 0.8726646259971648;  // 50 degrees
  int width = 256;
  int height = 256;
  double near = 1e-3;
  double far = 1e3;

  /// Throws Error(kInvalidConfig) when the invariants do not hold.
  void Validate() const;
};

/// Orthonormal view frame: right, true up and forward (towards look_at).
struct CameraFrame {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
  double focal_px;  // focal length in pixels
  Vec2 center;      // principal point in pixels
};

CameraFrame MakeFrame(const Camera& camera);

struct Projection {
  Vec2 screen;
  double depth;  // distance along the view axis
};

/// Throws Error(kBehindCamera) when the point is closer than `near` along
/// the view axis.
Projection Project(const Camera& camera, const Vec3& p);

/// Projection using a precomputed frame, with the 2x3 Jacobian of the screen
/// position with respect to p. Does not check the near plane.
Projection ProjectWithJacobian(const Camera& camera, const CameraFrame& frame,
                               const Vec3& p,
                               Eigen::Matrix<double, 2, 3>* jacobian);

}  // namespace cvxfit
