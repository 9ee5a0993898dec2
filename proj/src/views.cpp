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

#include "cvxfit/views.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "cvxfit/error.h"
#include "cvxfit/image_io.h"
#include "cvxfit/random.h"
#include "cvxfit/render.h"

namespace cvxfit {
namespace {

void AppendReal(std::string& out, double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

std::vector<Camera> FibonacciCameras(int count, const Vec3& center,
                                     double radius, int width, int height,
                                     uint64_t seed) {
  if (count < 1 || !(radius > 0) || width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidConfig, "bad view parameters");
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double azimuth =
      seed == 0 ? 0.0 : 2.0 * std::numbers::pi * Rng(seed).Uniform();
  std::vector<Camera> cameras;
  for (int i = 0; i < count; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double phi = golden * i + azimuth;
    const Vec3 dir(r * std::cos(phi), y, r * std::sin(phi));
    Camera cam;
    cam.position = center + radius * dir;
    cam.look_at = center;
    cam.up = std::abs(dir.y()) > 0.99 ? Vec3::UnitZ() : Vec3::UnitY();
    cam.width = width;
    cam.height = height;
    cameras.push_back(cam);
  }
  return cameras;
}

double BoundingRadius(std::span<const Mesh> meshes) {
  double r = 0;
  for (const Mesh& m : meshes) {
    for (const MeshVertex& v : m.vertices) r = std::max(r, v.position.norm());
  }
  if (!(r > 0)) throw Error(ErrorCode::kEmptyMesh, "no vertex off the origin");
  return r;
}

std::vector<RenderTarget> GenerateViews(std::span<const Mesh> meshes,
                                        int count, int width, int height,
                                        uint64_t seed) {
  const double radius = BoundingRadius(meshes);
  std::vector<RenderTarget> views;
  for (const Camera& cam :
       FibonacciCameras(count, Vec3::Zero(), kViewDistanceFactor * radius,
                        width, height, seed)) {
    views.push_back({cam, RasterHard(meshes, cam).silhouette});
  }
  return views;
}

std::string WriteManifest(std::span<const ManifestEntry> entries) {
  std::string out =
      "# px py pz lx ly lz ux uy uz fov_deg width height image\n";
  for (const ManifestEntry& e : entries) {
    const Camera& c = e.camera;
    for (const Vec3* v : {&c.position, &c.look_at, &c.up}) {
      for (int k = 0; k < 3; ++k) {
        AppendReal(out, (*v)[k]);
        out += ' ';
      }
    }
    AppendReal(out, c.fov_y * 180.0 / std::numbers::pi);
    out += ' ' + std::to_string(c.width) + ' ' + std::to_string(c.height) +
           ' ' + e.image + '\n';
  }
  return out;
}

std::vector<ManifestEntry> ParseManifest(const std::string& text) {
  std::vector<ManifestEntry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.size() != 13) {
      throw ParseError(line, "camera line needs 13 fields");
    }
    double v[10];
    for (int k = 0; k < 10; ++k) {
      const std::string& t = tokens[k];
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v[k]);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError(line, "bad number '" + t + "'");
      }
    }
    int size[2];
    for (int k = 0; k < 2; ++k) {
      const std::string& t = tokens[10 + k];
      const auto [ptr, ec] =
          std::from_chars(t.data(), t.data() + t.size(), size[k]);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError(line, "bad image size '" + t + "'");
      }
    }
    ManifestEntry e;
    e.camera.position = Vec3(v[0], v[1], v[2]);
    e.camera.look_at = Vec3(v[3], v[4], v[5]);
    e.camera.up = Vec3(v[6], v[7], v[8]);
    e.camera.fov_y = v[9] * std::numbers::pi / 180.0;
    e.camera.width = size[0];
    e.camera.height = size[1];
    e.image = tokens[12];
    try {
      e.camera.Validate();
    } catch (const Error& err) {
      throw ParseError(line, err.what());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void WriteViews(const std::string& dir, std::span<const RenderTarget> views) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + dir + "'");
  std::vector<ManifestEntry> entries;
  for (size_t i = 0; i < views.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "view_%03zu.pgm", i);
    WriteImage((std::filesystem::path(dir) / name).string(),
               views[i].silhouette);
    entries.push_back({views[i].camera, name});
  }
  WriteFile((std::filesystem::path(dir) / kManifestName).string(),
            WriteManifest(entries));
}

std::vector<RenderTarget> ReadViews(const std::string& dir) {
  const std::filesystem::path root(dir);
  std::vector<RenderTarget> views;
  for (const ManifestEntry& e :
       ParseManifest(ReadFile((root / kManifestName).string()))) {
    Image image = ReadImage((root / e.image).string());
    if (image.width != e.camera.width || image.height != e.camera.height) {
      throw Error(ErrorCode::kShapeMismatch,
                  "image '" + e.image + "' does not match its camera");
    }
    views.push_back({e.camera, std::move(image)});
  }
  return views;
}

Box RegionFromViews(std::span<const RenderTarget> views) {
  if (views.empty()) throw Error(ErrorCode::kEmptyInput, "no views");
  Vec3 center = Vec3::Zero();
  for (const RenderTarget& v : views) center += v.camera.look_at;
  center /= static_cast<double>(views.size());
  double distance = 0;
  for (const RenderTarget& v : views) {
    distance = std::max(distance, (v.camera.position - center).norm());
  }
  const double r = distance / kViewDistanceFactor;
  const Vec3 half = Vec3::Constant(r);
  return {center - half, center + half};
}

}  // namespace cvxfit
