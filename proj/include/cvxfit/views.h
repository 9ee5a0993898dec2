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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvxfit/camera.h"
#include "cvxfit/optimize.h"
#include "cvxfit/polytope.h"

namespace cvxfit {

constexpr int kDefaultViewCount = 16;
/// Cameras sit this many bounding radii from the target center.
constexpr double kViewDistanceFactor = 2.5;

/// Near-uniform viewpoints on a sphere around `center`, all looking at it.
/// A nonzero seed rotates the pattern by a random azimuth.
std::vector<Camera> FibonacciCameras(int count, const Vec3& center,
                                     double radius, int width, int height,
                                     uint64_t seed);

/// Largest distance of any vertex from the origin. Throws Error(kEmptyMesh)
/// if there are no vertices or all sit at the origin.
double BoundingRadius(std::span<const Mesh> meshes);

/// Hard silhouettes of the meshes from Fibonacci cameras looking at the
/// origin from kViewDistanceFactor bounding radii.
std::vector<RenderTarget> GenerateViews(std::span<const Mesh> meshes,
                                        int count, int width, int height,
                                        uint64_t seed);

struct ManifestEntry {
  Camera camera;
  std::string image;  // path relative to the manifest's directory
};

/// One camera per line: position, look_at, up, fov_y in degrees, width,
/// height, image file. Lines starting with '#' are comments.
std::string WriteManifest(std::span<const ManifestEntry> entries);
/// Throws ParseError.
std::vector<ManifestEntry> ParseManifest(const std::string& text);

constexpr const char* kManifestName = "cameras.txt";

/// Writes view_NNN.pgm files and the manifest into `dir`, creating it.
void WriteViews(const std::string& dir, std::span<const RenderTarget> views);
/// Reads the manifest and images written by WriteViews.
std::vector<RenderTarget> ReadViews(const std::string& dir);

/// Region whose translations may place convexes: the cube enclosing the
/// sphere the views were framed on.
Box RegionFromViews(std::span<const RenderTarget> views);

}  // namespace cvxfit
