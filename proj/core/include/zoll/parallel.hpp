// Copyright 2026 The zoll-lab Authors
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

#ifndef ZOLL_PARALLEL_HPP_
#define ZOLL_PARALLEL_HPP_

#include <functional>

namespace zoll {

// Worker count: ZOLL_LAB_THREADS if set to a positive integer, otherwise
// the hardware concurrency (at least 1).
int thread_count();

// Calls body(i) for i in [0, count). Indices are split into contiguous
// blocks, so results written to slot i do not depend on the thread count.
// The first exception thrown by any worker is rethrown.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace zoll

#endif  // ZOLL_PARALLEL_HPP_
