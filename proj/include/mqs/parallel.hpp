/**
 * Copyright 2026 The MQSVIS Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mqs {

/// Worker count from MQSVIS_THREADS, then OMP_NUM_THREADS, then the number
/// of hardware threads.
unsigned default_worker_count();

/// Calls fn(i) for every i in [0, count), splitting the range into contiguous
/// chunks, one per worker. fn must only write state owned by index i, so the
/// result does not depend on the worker count. The first exception thrown by
/// any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::int64_t count, unsigned workers, Fn&& fn) {
    if (count <= 0) return;
    const auto n_workers = static_cast<std::int64_t>(std::clamp<std::int64_t>(workers, 1, count));
    if (n_workers == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (std::int64_t w = 0; w < n_workers; ++w) {
        const std::int64_t begin = count * w / n_workers;
        const std::int64_t end = count * (w + 1) / n_workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace mqs
