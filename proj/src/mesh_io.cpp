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

#include "cvxfit/mesh_io.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "cvxfit/error.h"

namespace cvxfit {
namespace {

void AppendReal(std::string& out, double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

double ParseReal(const std::string& token, int line) {
  double value = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, "bad number '" + token + "'");
  }
  return value;
}

// Resolves "i", "i/t", "i//n" or "i/t/n" to a 0-based vertex index.
int ParseFaceIndex(const std::string& token, int num_vertices, int line) {
  const std::string head = token.substr(0, token.find('/'));
  int value = 0;
  const char* end = head.data() + head.size();
  const auto [ptr, ec] = std::from_chars(head.data(), end, value);
  if (ec != std::errc() || ptr != end || value == 0) {
    throw ParseError(line, "bad face index '" + token + "'");
  }
  const int index = value > 0 ? value - 1 : num_vertices + value;
  if (index < 0 || index >= num_vertices) {
    throw ParseError(line, "face index out of range");
  }
  return index;
}

}  // namespace

std::string WriteObj(std::span<const Mesh> meshes) {
  std::string out = "# cvxfit\n";
  int base = 1;
  for (size_t m = 0; m < meshes.size(); ++m) {
    const Mesh& mesh = meshes[m];
    const int id = !mesh.vertices.empty() && mesh.vertices[0].convex_id >= 0
                       ? mesh.vertices[0].convex_id
                       : static_cast<int>(m);
    out += "o convex_" + std::to_string(id) + "\n";
    for (const MeshVertex& v : mesh.vertices) {
      out += 'v';
      for (int k = 0; k < 3; ++k) {
        out += ' ';
        AppendReal(out, v.position[k]);
      }
      out += '\n';
    }
    for (const Tri& t : mesh.triangles) {
      out += "f " + std::to_string(t[0] + base) + ' ' +
             std::to_string(t[1] + base) + ' ' + std::to_string(t[2] + base) +
             '\n';
    }
    base += static_cast<int>(mesh.vertices.size());
  }
  return out;
}

Mesh ReadObj(const std::string& text) {
  Mesh mesh;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(raw);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    if (kind == "v") {
      MeshVertex v;
      for (int k = 0; k < 3; ++k) {
        std::string token;
        if (!(fields >> token)) throw ParseError(line, "vertex needs 3 numbers");
        v.position[k] = ParseReal(token, line);
      }
      mesh.vertices.push_back(v);
    } else if (kind == "f") {
      std::vector<int> ids;
      std::string token;
      const int n = static_cast<int>(mesh.vertices.size());
      while (fields >> token) ids.push_back(ParseFaceIndex(token, n, line));
      if (ids.size() < 3) throw ParseError(line, "face needs 3 vertices");
      for (size_t k = 1; k + 1 < ids.size(); ++k) {
        mesh.triangles.push_back({ids[0], ids[k], ids[k + 1]});
        mesh.triangle_planes.push_back(-1);
      }
    }
  }
  return mesh;
}

}  // namespace cvxfit
