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

#include "cvxfit/camera.h"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "cvxfit/error.h"

namespace cvxfit {

void Camera::Validate() const {
  if (!((look_at - position).norm() > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "camera position equals look_at");
  }
  if (!(fov_y > 0 && fov_y < std::numbers::pi)) {
    throw Error(ErrorCode::kInvalidConfig, "field of view out of (0, pi)");
  }
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidConfig, "empty image size");
  }
  if (!(near > 0 && far > near)) {
    throw Error(ErrorCode::kInvalidConfig, "bad near/far range");
  }
  if ((look_at - position).cross(up).norm() == 0) {
    throw Error(ErrorCode::kInvalidConfig, "up vector parallel to view axis");
  }
}

CameraFrame MakeFrame(const Camera& camera) {
  CameraFrame f;
  f.forward = (camera.look_at - camera.position).normalized();
  f.right = f.forward.cross(camera.up).normalized();
  f.up = f.right.cross(f.forward);
  f.focal_px = 0.5 * camera.height / std::tan(0.5 * camera.fov_y);
  f.center = Vec2(0.5 * camera.width, 0.5 * camera.height);
  return f;
}

Projection ProjectWithJacobian(const Camera& camera, const CameraFrame& frame,
                               const Vec3& p,
                               Eigen::Matrix<double, 2, 3>* jacobian) {
  const Vec3 v = p - camera.position;
  const double z = v.dot(frame.forward);
  const double x = v.dot(frame.right);
  const double y = v.dot(frame.up);
  const double inv_z = 1.0 / z;
  Projection out;
  out.depth = z;
  out.screen = Vec2(frame.center.x() + frame.focal_px * x * inv_z,
                    frame.center.y() - frame.focal_px * y * inv_z);
  if (jacobian != nullptr) {
    const double s = frame.focal_px * inv_z;
    jacobian->row(0) = s * (frame.right - x * inv_z * frame.forward).transpose();
    jacobian->row(1) = -s * (frame.up - y * inv_z * frame.forward).transpose();
  }
  return out;
}

Projection Project(const Camera& camera, const Vec3& p) {
  const CameraFrame frame = MakeFrame(camera);
  const double z = (p - camera.position).dot(frame.forward);
  if (!(z >= camera.near)) {
    throw Error(ErrorCode::kBehindCamera, "depth " + std::to_string(z));
  }
  return ProjectWithJacobian(camera, frame, p, nullptr);
}

}  // namespace cvxfit
