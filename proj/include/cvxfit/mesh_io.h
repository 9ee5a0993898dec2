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

#include <span>
#include <string>

#include "cvxfit/polytope.h"

namespace cvxfit {

/// Vertex and face records with 1-based indices, one `o` group per mesh,
/// named after the convex id of its first vertex (or its position).
std::string WriteObj(std::span<const Mesh> meshes);

/// Reads v and f records into one mesh; polygons are fan-triangulated and
/// negative (relative) indices are honoured. Other records are ignored.
/// Throws ParseError.
Mesh ReadObj(const std::string& text);

}  // namespace cvxfit
