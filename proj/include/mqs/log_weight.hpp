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

#include <cmath>
#include <compare>
#include <limits>

namespace mqs {

/// Nonnegative quantity stored as its natural logarithm.
///
/// Exact zero is the distinguished value -infinity, so products and ratios of
/// probabilities far below the double range stay representable. The logarithm
/// is held in extended precision: a double log of magnitude 10^4 would cost
/// about 10^-12 of relative accuracy in the represented value. Ordering of
/// LogWeights is the ordering of the represented quantities.
class LogWeight {
public:
    constexpr LogWeight() noexcept : log_(-std::numeric_limits<long double>::infinity()) {}

    static constexpr LogWeight from_log(long double log_value) noexcept { return LogWeight(log_value); }
    static LogWeight from_value(double value) noexcept {
        return LogWeight(value > 0.0 ? std::log(static_cast<long double>(value))
                                     : -std::numeric_limits<long double>::infinity());
    }
    static constexpr LogWeight zero() noexcept { return LogWeight(); }
    static constexpr LogWeight one() noexcept { return LogWeight(0.0L); }

    constexpr long double log() const noexcept { return log_; }
    double value() const noexcept { return static_cast<double>(std::exp(log_)); }
    constexpr bool is_zero() const noexcept { return log_ == -std::numeric_limits<long double>::infinity(); }

    /// Square root of the represented quantity.
    constexpr LogWeight sqrt() const noexcept { return LogWeight(0.5L * log_); }

    friend constexpr LogWeight operator*(LogWeight a, LogWeight b) noexcept {
        if (a.is_zero() || b.is_zero()) return zero();
        return LogWeight(a.log_ + b.log_);
    }
    friend constexpr LogWeight operator/(LogWeight a, LogWeight b) noexcept {
        if (a.is_zero()) return zero();
        return LogWeight(a.log_ - b.log_);
    }
    LogWeight& operator*=(LogWeight other) noexcept { return *this = *this * other; }

    friend constexpr bool operator==(LogWeight a, LogWeight b) noexcept { return a.log_ == b.log_; }
    friend constexpr auto operator<=>(LogWeight a, LogWeight b) noexcept { return a.log_ <=> b.log_; }

private:
    constexpr explicit LogWeight(long double log_value) noexcept : log_(log_value) {}

    long double log_;
};

}  // namespace mqs
