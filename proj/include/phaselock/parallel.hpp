// Copyright 2026 The phaselock Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/**
 * @file
 * Static-partition parallel loop. Each index is processed by exactly one
 * worker and writes only its own output slot, so results do not depend on
 * the worker count.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace phaselock {

template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body &&body) {
    workers = std::max(1U, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(workers, count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (std::size_t w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    // Strided assignment balances rows of uneven cost.
                    for (std::size_t i = w; i < count; i += nthreads) {
                        body(i);
                    }
                } catch (...) {
                    const std::scoped_lock lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Worker count from PHASELOCK_WORKERS, falling back to `fallback`.
inline unsigned workers_from_env(unsigned fallback) {
    if (const char *env = std::getenv("PHASELOCK_WORKERS"); env != nullptr && *env != '\0') {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return fallback;
}

} // namespace phaselock
