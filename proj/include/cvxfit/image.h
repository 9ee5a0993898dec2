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

#include <vector>

namespace cvxfit {

/// Single-channel row-major image of doubles.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Image() = default;
  Image(int w, int h, double fill = 0) : width(w), height(h), values(w * h, fill) {}

  double& at(int x, int y) { return values[y * width + x]; }
  double at(int x, int y) const { return values[y * width + x]; }
  size_t size() const { return values.size(); }
  bool SameShape(const Image& other) const {
    return width == other.width && height == other.height;
  }
};

}  // namespace cvxfit
