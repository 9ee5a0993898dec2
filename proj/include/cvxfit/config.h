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
#include <string>

#include "cvxfit/optimize.h"

namespace cvxfit {

/// Everything a fit run needs besides the targets.
struct FitConfig {
  FitOptions options;
  int total_steps = 20000;
  int num_events = 10;
  double event_span = 0.8;
  int convexes = 32;
  int planes = 16;
  double initial_size = 0.15;
  uint64_t seed = 0;

  /// Options with the schedule rebuilt from total_steps, num_events and
  /// event_span.
  FitOptions Resolved() const;
};

/// Applies "key = value" lines to `config`. '#' starts a comment. Throws
/// ParseError on malformed lines and Error(kInvalidConfig) on unknown keys
/// or out-of-range values.
void ApplyConfig(const std::string& text, FitConfig& config);

FitConfig ParseConfig(const std::string& text);

}  // namespace cvxfit
