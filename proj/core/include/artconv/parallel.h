// Copyright 2026 The artconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARTCONV_PARALLEL_H_
#define ARTCONV_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace artconv {

// Upper bound on worker threads used by any module. 0 restores the
// default (hardware concurrency).
void SetThreadLimit(int threads);
int ThreadLimit();

// Runs fn(i) for i in [0, n) on up to ThreadLimit() threads. Work is split
// into contiguous blocks; callers write results to per-index slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// worker is rethrown on the calling thread.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace artconv

#endif  // ARTCONV_PARALLEL_H_
