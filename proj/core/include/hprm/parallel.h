// Copyright (c) 2026 The hprm Authors
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

#ifndef HPRM_PARALLEL_H_
#define HPRM_PARALLEL_H_

#include <functional>

namespace hprm {

// Resolves a thread-count flag: values < 1 mean "all hardware threads".
int ResolveThreads(int requested);

// Calls fn(index, worker) for every index in [0, n) on up to `threads`
// workers (worker in [0, threads)). Work is claimed dynamically, so callers
// must write results by index. If any call throws, the exception from the
// lowest failing index is rethrown after all workers finish.
void ParallelFor(int n, int threads,
                 const std::function<void(int index, int worker)>& fn);

}  // namespace hprm

#endif  // HPRM_PARALLEL_H_
