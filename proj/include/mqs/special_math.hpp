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

#include <cstdint>
#include <span>

#include "mqs/log_weight.hpp"

namespace mqs {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// ln(n!). Relative error below 1e-14.
double log_factorial(std::int64_t n);

/// ln(n!) in extended precision; used where several large log-factorials
/// cancel against each other.
long double log_factorial_ext(std::int64_t n);

/// Digamma function. Throws DomainError for x <= 0.
double digamma(double x);

/// Trigamma function (derivative of digamma). Throws DomainError for x <= 0.
double trigamma(double x);

/// Solves digamma(x) = y for x > 0.
double inverse_digamma(double y);

/// count * ln(base) with the convention 0 * ln(0) = 0.
inline long double xlogy(long double count, long double log_base) {
    return count == 0.0L ? 0.0L : count * log_base;
}

/// Sum of the represented values, returned in log form.
///
/// Terms are added in the order given; callers pass them sorted ascending to
/// keep the rounding error at count * epsilon.
LogWeight accumulate_ascending(std::span<const LogWeight> terms);

}  // namespace mqs
