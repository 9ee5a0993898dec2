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

#include <cstddef>
#include <functional>

namespace cvxfit {

/// Worker count: CVXFIT_THREADS if set and positive, otherwise the hardware
/// concurrency.
int NumThreads();

/// Runs fn(i) for i in [0, n). Iterations must write to disjoint state;
/// callers reduce results in index order afterwards.
void ParallelFor(size_t n, const std::function<void(size_t)>& fn);

}  // namespace cvxfit
