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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mqs/errors.hpp"
#include "mqs/special_math.hpp"

using namespace mqs;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("log_factorial small values") {
    CHECK(log_factorial(0) == 0.0);
    CHECK(log_factorial(1) == 0.0);
    CHECK(log_factorial(5) == doctest::Approx(4.787491742782046).epsilon(1e-15));
    CHECK(rel(log_factorial(170), 706.5730622457873) < 1e-14);
    CHECK_THROWS_AS(log_factorial(-1), DomainError);
}

TEST_CASE("log_factorial against big-float lgamma") {
    for (std::int64_t n : {2, 20, 171, 1000, 4001, 65535, 65536, 100000, 2000000}) {
        const double ref = static_cast<double>(boost::multiprecision::lgamma(Big(n + 1)));
        CHECK_MESSAGE(rel(log_factorial(n), ref) < 1e-14, "n=" << n);
        CHECK_MESSAGE(rel(static_cast<double>(log_factorial_ext(n)), ref) < 1e-15, "n=" << n);
    }
}

TEST_CASE("log_factorial recurrence") {
    for (std::int64_t n = 1; n <= 100000; ++n) {
        const double lhs = log_factorial(n);
        const double rhs = log_factorial(n - 1) + std::log(static_cast<double>(n));
        if (rel(lhs, rhs) > 1e-13 && std::abs(lhs - rhs) > 1e-15) {
            FAIL("recurrence broken at n=" << n);
        }
    }
}

TEST_CASE("digamma values") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-15));
    CHECK(digamma(2.0) == doctest::Approx(0.4227843350984671).epsilon(1e-15));
    CHECK(digamma(10.0) == doctest::Approx(2.2517525890667211).epsilon(1e-15));
    for (double x : {0.01, 0.3, 0.5, 1.7, 6.0, 9.99, 123.4, 1e6, 1e12}) {
        CHECK_MESSAGE(std::abs(digamma(x) - boost::math::digamma(x)) <= 1e-13 * std::max(1.0, std::abs(digamma(x))),
                      "x=" << x);
    }
    CHECK_THROWS_AS(digamma(0.0), DomainError);
    CHECK_THROWS_AS(digamma(-2.5), DomainError);
}

TEST_CASE("trigamma values") {
    CHECK(trigamma(1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
    CHECK(trigamma(0.5) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
}

TEST_CASE("inverse_digamma") {
    CHECK(inverse_digamma(-0.5772156649015329) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inverse_digamma(2.2517525890667211) == doctest::Approx(10.0).epsilon(1e-12));
    const double x20 = inverse_digamma(20.0);
    CHECK(x20 == doctest::Approx(std::exp(20.0) + 0.5).epsilon(1e-9));
    CHECK(digamma(x20) == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("inverse_digamma roundtrip") {
    for (double x : {0.5, 1.0, 2.0, 10.0, 1e3, 1e6}) CHECK(rel(inverse_digamma(digamma(x)), x) < 1e-9);
    for (double x : {1e-3, 0.05, 0.2, 3.3, 47.0}) CHECK(rel(inverse_digamma(digamma(x)), x) < 1e-9);
}

TEST_CASE("accumulate_ascending basics") {
    CHECK(accumulate_ascending(std::vector<LogWeight>{}).is_zero());
    const std::vector<LogWeight> two = {LogWeight::one(), LogWeight::one()};
    CHECK(accumulate_ascending(two).log() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const std::vector<LogWeight> with_zero = {LogWeight::zero(), LogWeight::from_value(3.0)};
    CHECK(accumulate_ascending(with_zero).value() == doctest::Approx(3.0));
}

TEST_CASE("accumulate_ascending resists underflow") {
    const double l = -300.0 * std::log(10.0);
    const std::vector<LogWeight> terms(1'000'000, LogWeight::from_log(l));
    const double expected = -294.0 * std::log(10.0);
    CHECK(rel(accumulate_ascending(terms).log(), expected) < 1e-13);
    // below the smallest denormal as plain doubles
    const std::vector<LogWeight> tiny(1000, LogWeight::from_log(-2000.0));
    CHECK(accumulate_ascending(tiny).log() == doctest::Approx(-2000.0 + std::log(1000.0)).epsilon(1e-15));
}

TEST_CASE("accumulate_ascending is permutation stable") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-60.0, 0.0);
    std::vector<LogWeight> terms;
    for (int i = 0; i < 5000; ++i) terms.push_back(LogWeight::from_log(u(rng)));
    const double ref = accumulate_ascending(terms).log();
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(terms.begin(), terms.end(), rng);
        CHECK(rel(accumulate_ascending(terms).log(), ref) < 1e-12);
    }
}
