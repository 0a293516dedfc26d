// Copyright 2026 The fairloan Authors
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

#ifndef FAIRLOAN_PARALLEL_H_
#define FAIRLOAN_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fairloan {

// Runs fn(i) for every i in [0, n) on up to `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome is independent of scheduling. threads <= 1 runs inline.
void ParallelFor(size_t n, int threads, const std::function<void(size_t)>& fn);

// Resolves a user-facing thread count: 0 means hardware concurrency.
int ResolveThreads(int requested);

}  // namespace fairloan

#endif  // FAIRLOAN_PARALLEL_H_
