// Copyright (c) the addq authors.
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

#pragma once

#include <cstdint>
#include <functional>

namespace addq {

int hardware_threads();

// 0 -> hardware concurrency; anything else clamped to >= 1.
int resolve_threads(int requested);

// Runs fn(begin, end) over contiguous chunks of [0, n). Workers write to
// disjoint output slots; any reduction happens afterwards in index order, so
// the result never depends on the thread count.
void parallel_for(
        int64_t n,
        int threads,
        const std::function<void(int64_t, int64_t)>& fn);

} // namespace addq
