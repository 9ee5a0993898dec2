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

#include <cmath>
#include <optional>

#include "cvxfit/types.h"

namespace cvxfit {

/// Infinity-norm of a 3x3 matrix (max absolute row sum).
inline double NormInf(const Mat3& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Cofactor inverse of a 3x3 matrix. Returns nullopt when the
/// infinity-norm condition number exceeds `condition_cap` or the matrix is
/// singular.
inline std::optional<Mat3> Inverse3x3(const Mat3& m, double condition_cap) {
  Mat3 cof;
  cof(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  cof(0, 1) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  cof(0, 2) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  cof(1, 0) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  cof(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  cof(1, 2) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  cof(2, 0) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  cof(2, 1) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  cof(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double det =
      m(0, 0) * cof(0, 0) + m(0, 1) * cof(0, 1) + m(0, 2) * cof(0, 2);
  if (det == 0 || !std::isfinite(det)) return std::nullopt;
  const Mat3 inv = cof.transpose() / det;
  const double cond = NormInf(m) * NormInf(inv);
  if (!std::isfinite(cond) || cond > condition_cap) return std::nullopt;
  return inv;
}

}  // namespace cvxfit
