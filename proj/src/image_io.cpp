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

#include "cvxfit/image_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cvxfit/error.h"

namespace cvxfit {
namespace {

int ToLevel(double v) {
  return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Header tokens are separated by whitespace and may be interleaved with
// '#' comments running to the end of the line.
class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  long Number() {
    SkipSpaceAndComments();
    const size_t begin = pos_;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (pos_ == begin || pos_ - begin > 9) {
      throw ParseError(0, "bad graymap header");
    }
    return std::stol(bytes_.substr(begin, pos_ - begin));
  }

  size_t pos() const { return pos_; }
  void Advance(size_t n) { pos_ += n; }

  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

 private:
  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string EncodePgm(const Image& image, bool binary) {
  std::string out = (binary ? "P5\n" : "P2\n") + std::to_string(image.width) +
                    ' ' + std::to_string(image.height) + "\n255\n";
  if (binary) {
    for (double v : image.values) out += static_cast<char>(ToLevel(v));
    return out;
  }
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(ToLevel(image.at(x, y)));
    }
    out += '\n';
  }
  return out;
}

Image DecodePgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError(1, "not a graymap");
  }
  const bool binary = bytes[1] == '5';
  HeaderReader header(bytes);
  header.Advance(2);
  const long width = header.Number();
  const long height = header.Number();
  const long maxval = header.Number();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535 ||
      width * height > (1L << 28)) {
    throw ParseError(1, "bad graymap dimensions");
  }
  Image image(static_cast<int>(width), static_cast<int>(height));
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    header.Advance(1);
    const size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() < header.pos() + image.size() * bpp) {
      throw ParseError(1, "truncated graymap");
    }
    const auto* data =
        reinterpret_cast<const unsigned char*>(bytes.data() + header.pos());
    for (size_t i = 0; i < image.size(); ++i) {
      const long level =
          bpp == 1 ? data[i] : (data[2 * i] << 8) | data[2 * i + 1];
      if (level > maxval) throw ParseError(1, "graymap value above maxval");
      image.values[i] = static_cast<double>(level) * scale;
    }
    return image;
  }
  for (size_t i = 0; i < image.size(); ++i) {
    const long level = header.Number();
    if (level > maxval) throw ParseError(1, "graymap value above maxval");
    image.values[i] = static_cast<double>(level) * scale;
  }
  return image;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
}

Image ReadImage(const std::string& path) { return DecodePgm(ReadFile(path)); }

void WriteImage(const std::string& path, const Image& image, bool binary) {
  WriteFile(path, EncodePgm(image, binary));
}

}  // namespace cvxfit
