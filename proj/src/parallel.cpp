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

#include "parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace addq {

int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

int resolve_threads(int requested) {
    if (requested <= 0) {
        return hardware_threads();
    }
    return requested;
}

void parallel_for(
        int64_t n,
        int threads,
        const std::function<void(int64_t, int64_t)>& fn) {
    if (n <= 0) {
        return;
    }
    threads = resolve_threads(threads);
    // below this size thread startup dominates the work
    constexpr int64_t kMinChunk = 256;
    int64_t max_workers = std::max<int64_t>(1, n / kMinChunk);
    int workers = static_cast<int>(
            std::min<int64_t>(threads, std::min<int64_t>(max_workers, n)));
    if (workers <= 1) {
        fn(0, n);
        return;
    }

    int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));

    auto run = [&](int w) {
        int64_t begin = w * chunk;
        int64_t end = std::min<int64_t>(n, begin + chunk);
        if (begin >= end) {
            return;
        }
        try {
            fn(begin, end);
        } catch (...) {
            errors[static_cast<size_t>(w)] = std::current_exception();
        }
    };

    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(run, w);
    }
    run(0);
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace addq
