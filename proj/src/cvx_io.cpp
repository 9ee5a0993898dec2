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

#include "cvxfit/cvx_io.h"

#include <charconv>
#include <cmath>
#include <string_view>

#include "cvxfit/error.h"

namespace cvxfit {
namespace {

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > begin) out.push_back(line.substr(begin, i - begin));
  }
  return out;
}

double ParseReal(std::string_view token, int line) {
  double value = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, "bad number '" + std::string(token) + "'");
  }
  return value;
}

int ParseIndex(std::string_view token, int line) {
  int value = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    throw ParseError(line, "bad plane index '" + std::string(token) + "'");
  }
  return value;
}

void AppendReal(std::string& out, double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc()) {
    // Magnitudes whose fixed form overflows the buffer.
    const auto [p2, e2] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, p2);
    return;
  }
  out.append(buf, ptr);
}

}  // namespace

bool CvxDocument::operator==(const CvxDocument& other) const {
  if (planes.size() != other.planes.size() ||
      convexes != other.convexes ||
      translations.size() != other.translations.size()) {
    return false;
  }
  for (size_t i = 0; i < planes.size(); ++i) {
    if (planes[i].normal != other.planes[i].normal ||
        planes[i].offset != other.planes[i].offset) {
      return false;
    }
  }
  for (size_t i = 0; i < translations.size(); ++i) {
    if (translations[i] != other.translations[i]) return false;
  }
  return true;
}

CvxDocument ParseCvx(const std::string& text,
                     std::vector<CvxWarning>* warnings) {
  CvxDocument doc;
  std::vector<int> convex_lines;
  std::string_view rest(text);
  int line = 0;
  while (!rest.empty()) {
    ++line;
    const size_t nl = rest.find('\n');
    std::string_view raw = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view()
                                        : rest.substr(nl + 1);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty()) throw ParseError(line, "blank line");

    const std::vector<std::string_view> tokens = Tokens(raw);
    const char kind = raw[0];
    if (tokens.empty() || tokens[0].size() != 1 ||
        (kind != 'p' && kind != 'c' && kind != 't')) {
      throw ParseError(line, "unknown record '" + std::string(raw) + "'");
    }
    if (kind == 'p') {
      if (tokens.size() != 5) {
        throw ParseError(line, "plane needs 4 numbers");
      }
      Hyperplane plane;
      for (int k = 0; k < 3; ++k) plane.normal[k] = ParseReal(tokens[k + 1], line);
      plane.offset = ParseReal(tokens[4], line);
      if (warnings && !(plane.offset > 0)) {
        warnings->push_back({line, "non-positive plane offset"});
      }
      if (warnings && plane.normal.isZero(0)) {
        warnings->push_back({line, "zero plane normal"});
      }
      doc.planes.push_back(plane);
    } else if (kind == 'c') {
      if (tokens.size() < 2) throw ParseError(line, "convex without planes");
      std::vector<int> ids;
      for (size_t k = 1; k < tokens.size(); ++k) {
        ids.push_back(ParseIndex(tokens[k], line));
      }
      doc.convexes.push_back(std::move(ids));
      convex_lines.push_back(line);
    } else {
      if (tokens.size() != 4) {
        throw ParseError(line, "translation needs 3 numbers");
      }
      if (doc.translations.size() >= doc.convexes.size()) {
        throw ParseError(line, "translation without a preceding convex");
      }
      doc.translations.emplace_back(ParseReal(tokens[1], line),
                                    ParseReal(tokens[2], line),
                                    ParseReal(tokens[3], line));
    }
  }
  for (size_t c = 0; c < doc.convexes.size(); ++c) {
    for (int id : doc.convexes[c]) {
      if (id >= static_cast<int>(doc.planes.size())) {
        throw ParseError(convex_lines[c],
                         "plane index " + std::to_string(id) + " out of range");
      }
    }
  }
  doc.translations.resize(doc.convexes.size(), Vec3::Zero());
  return doc;
}

std::string WriteCvx(const CvxDocument& doc) {
  std::string out;
  for (const Hyperplane& p : doc.planes) {
    out += 'p';
    for (int k = 0; k < 3; ++k) {
      out += ' ';
      AppendReal(out, p.normal[k]);
    }
    out += ' ';
    AppendReal(out, p.offset);
    out += '\n';
  }
  for (const std::vector<int>& ids : doc.convexes) {
    out += 'c';
    for (int id : ids) {
      out += ' ';
      out += std::to_string(id);
    }
    out += '\n';
  }
  for (size_t c = 0; c < doc.convexes.size(); ++c) {
    const Vec3 t =
        c < doc.translations.size() ? doc.translations[c] : Vec3::Zero();
    out += 't';
    for (int k = 0; k < 3; ++k) {
      out += ' ';
      AppendReal(out, t[k]);
    }
    out += '\n';
  }
  return out;
}

CvxDocument DocumentFromScene(const Scene& scene) {
  CvxDocument doc;
  for (const ConvexPolyhedron& c : scene.convexes) {
    std::vector<int> ids;
    for (const Hyperplane& p : c.planes) {
      ids.push_back(static_cast<int>(doc.planes.size()));
      doc.planes.push_back(p);
    }
    doc.convexes.push_back(std::move(ids));
    doc.translations.push_back(c.translation);
  }
  return doc;
}

std::vector<ConvexPolyhedron> ConvexesFromDocument(const CvxDocument& doc) {
  std::vector<ConvexPolyhedron> out;
  for (size_t c = 0; c < doc.convexes.size(); ++c) {
    ConvexPolyhedron poly;
    poly.id = static_cast<int>(c);
    if (c < doc.translations.size()) poly.translation = doc.translations[c];
    for (int id : doc.convexes[c]) {
      if (id < 0 || id >= static_cast<int>(doc.planes.size())) {
        throw Error(ErrorCode::kShapeMismatch, "plane index out of range");
      }
      poly.planes.push_back(doc.planes[id]);
    }
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace cvxfit
