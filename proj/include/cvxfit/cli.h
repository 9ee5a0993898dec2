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

#include <ostream>
#include <string>
#include <vector>

#include "cvxfit/polytope.h"

namespace cvxfit {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataError = 2;

/// Entry point of the command-line tool. Subcommands: gen-views, fit,
/// render, eval, convert.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

/// Meshes from an OBJ file, or one mesh per convex from a .cvx file.
std::vector<Mesh> LoadMeshes(const std::string& path, std::ostream& err);

}  // namespace cvxfit
