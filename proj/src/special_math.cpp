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

#include "mqs/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mqs/errors.hpp"

namespace mqs {

namespace {

constexpr std::int64_t kTableSize = 1 << 16;

const std::vector<long double>& log_factorial_table() {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(kTableSize);
        for (std::int64_t n = 0; n < kTableSize; ++n) t[n] = std::lgammal(static_cast<long double>(n) + 1.0L);
        return t;
    }();
    return table;
}

// Arguments below this are shifted up with the recurrence before the
// asymptotic series is applied; the first omitted Bernoulli term is < 1e-15.
constexpr double kAsymptoticFloor = 10.0;

void require_positive(double x, const char* name) {
    if (!(x > 0.0)) throw DomainError(std::string(name) + ": argument must be positive, got " + std::to_string(x));
}

}  // namespace

long double log_factorial_ext(std::int64_t n) {
    if (n < 0) throw DomainError("log_factorial: negative argument " + std::to_string(n));
    if (n < kTableSize) return log_factorial_table()[n];
    return std::lgammal(static_cast<long double>(n) + 1.0L);
}

double log_factorial(std::int64_t n) { return static_cast<double>(log_factorial_ext(n)); }

double digamma(double x) {
    require_positive(x, "digamma");
    double shift = 0.0;
    while (x < kAsymptoticFloor) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli series: B2/2, B4/4, ..., B12/12
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760))))));
    return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
    require_positive(x, "trigamma");
    double shift = 0.0;
    while (x < kAsymptoticFloor) {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double r = inv * inv;
    const double series = inv * r * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66)))));
    return shift + inv + 0.5 * r + series;
}

double inverse_digamma(double y) {
    if (!std::isfinite(y)) throw DomainError("inverse_digamma: argument must be finite");
    // Fackler's starting point
    double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + kEulerGamma);
    for (int iter = 0; iter < 8; ++iter) {
        const double step = (digamma(x) - y) / trigamma(x);
        double next = x - step;
        if (next <= 0.0) next = 0.5 * x;
        const bool done = std::abs(next - x) <= 1e-15 * next;
        x = next;
        if (done) break;
    }
    return x;
}

LogWeight accumulate_ascending(std::span<const LogWeight> terms) {
    if (terms.empty()) return LogWeight::zero();
    const LogWeight top = *std::max_element(terms.begin(), terms.end());
    if (top.is_zero()) return LogWeight::zero();
    // Neumaier-compensated sum of the terms scaled by the largest one
    double sum = 0.0;
    double carry = 0.0;
    for (const LogWeight t : terms) {
        const double v = std::exp(t.log() - top.log());
        const double s = sum + v;
        carry += std::abs(sum) >= v ? (sum - s) + v : (v - s) + sum;
        sum = s;
    }
    return LogWeight::from_log(top.log() + std::log(sum + carry));
}

}  // namespace mqs
