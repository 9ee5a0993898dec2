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

#include <string>

#include "cvxfit/image.h"

namespace cvxfit {

/// Portable graymap with values scaled to [0, 1]. Plain (P2) or binary (P5)
/// with maxval 255, values rounded and clamped.
std::string EncodePgm(const Image& image, bool binary = true);

/// Reads P2 or P5 with any maxval up to 65535. Throws ParseError.
Image DecodePgm(const std::string& bytes);

/// Throws Error(kIoError) on file errors.
Image ReadImage(const std::string& path);
void WriteImage(const std::string& path, const Image& image,
                bool binary = true);

/// Whole-file helpers shared by the readers. Throw Error(kIoError).
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace cvxfit
