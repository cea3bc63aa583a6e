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

#include "mqs/parallel.hpp"

#include <cstdlib>
#include <string>

namespace mqs {

namespace {

unsigned parse_count(const char* text) {
    if (text == nullptr || *text == '\0') return 0;
    try {
        const long v = std::stol(text);
        return v > 0 ? static_cast<unsigned>(v) : 0;
    } catch (...) {
        return 0;
    }
}

}  // namespace

unsigned default_worker_count() {
    if (const unsigned n = parse_count(std::getenv("MQSVIS_THREADS"))) return n;
    if (const unsigned n = parse_count(std::getenv("OMP_NUM_THREADS"))) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace mqs
