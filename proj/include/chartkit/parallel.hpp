// chartkit: digital-twin-aided channel charting toolkit
// Copyright (C) 2026 The chartkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace chartkit {

// Worker cap from CHARTKIT_THREADS, defaulting to the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("CHARTKIT_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1)
            return unsigned(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs f(i) for i in [0, n). Work is split into contiguous index blocks, so
// callers that write results by index get deterministic output regardless of
// scheduling.
template <class F>
void parallel_for(std::size_t n, F&& f, unsigned max_workers = 0) {
    unsigned workers = worker_count();
    if (max_workers > 0)
        workers = std::min(workers, max_workers);
    workers = unsigned(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::size_t(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i)
                f(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace chartkit
