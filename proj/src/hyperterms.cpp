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

#include "mqs/hyperterms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mqs/errors.hpp"
#include "mqs/special_math.hpp"

namespace mqs {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();
const long double kLog4 = std::log(4.0L);

LogWeight to_weight(long double log_value) {
    if (log_value == kNegInf) return LogWeight::zero();
    return LogWeight::from_log(log_value);
}

long double safe_log(long double x) { return x > 0.0L ? std::log(x) : kNegInf; }

}  // namespace

GainParams GainParams::from_mean(double m) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("mean photon parameter must be finite and >= 0");
    GainParams p;
    p.m = m;
    p.g = std::asinh(std::sqrt(m));
    p.cosh_g = std::sqrt(1.0 + m);
    p.z = m / (1.0 + m);
    p.tanh_g = std::sqrt(p.z);
    const long double lm = static_cast<long double>(m);
    p.log_cosh_sq = std::log1p(lm);
    p.log_quarter_z = m > 0.0 ? std::log(lm) - std::log1p(lm) - kLog4 : kNegInf;
    return p;
}

GainParams GainParams::from_gain(double g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("gain must be finite and >= 0");
    GainParams p;
    const long double s = std::sinh(static_cast<long double>(g));
    const long double c = std::cosh(static_cast<long double>(g));
    const long double t = std::tanh(static_cast<long double>(g));
    p.g = g;
    p.m = static_cast<double>(s * s);
    p.cosh_g = static_cast<double>(c);
    p.tanh_g = static_cast<double>(t);
    p.z = static_cast<double>(t * t);
    p.log_cosh_sq = 2.0L * std::log(c);
    p.log_quarter_z = g > 0.0 ? 2.0L * std::log(t) - kLog4 : kNegInf;
    return p;
}

BeamSplitterParams BeamSplitterParams::from_reflectivity(double R) {
    if (!(R >= 0.0 && R <= 1.0)) throw DomainError("reflectivity must lie in [0, 1], got " + std::to_string(R));
    BeamSplitterParams bs;
    bs.R = R;
    bs.T = 1.0 - R;
    bs.log_R = safe_log(R);
    bs.log_T = std::log1p(-static_cast<long double>(R));
    if (R == 1.0) bs.log_T = kNegInf;
    return bs;
}

LogWeight log_sq_gamma_i0(std::int64_t i, const GainParams& gain) {
    if (i < 0) return LogWeight::zero();
    return to_weight(-2.0L * gain.log_cosh_sq + xlogy(i, gain.log_quarter_z) + log_factorial_ext(2 * i + 1) -
                     2.0L * log_factorial_ext(i));
}

LogWeight log_sq_gamma_0j(std::int64_t j, const GainParams& gain) {
    if (j < 0) return LogWeight::zero();
    return to_weight(-2.0L * gain.log_cosh_sq + xlogy(j, gain.log_quarter_z) + log_factorial_ext(2 * j) -
                     2.0L * log_factorial_ext(j));
}

LogWeight log_sq_gamma(std::int64_t i, std::int64_t j, const GainParams& gain) {
    if (i < 0 || j < 0) return LogWeight::zero();
    return to_weight(-2.0L * gain.log_cosh_sq + xlogy(i + j, gain.log_quarter_z) + log_factorial_ext(2 * i + 1) -
                     2.0L * log_factorial_ext(i) + log_factorial_ext(2 * j) - 2.0L * log_factorial_ext(j));
}

LogWeight log_bs_coeff_sq(std::int64_t k, std::int64_t N, const BeamSplitterParams& bs) {
    if (N < 0 || k < 0 || k > N) return LogWeight::zero();
    return to_weight(log_factorial_ext(N) - log_factorial_ext(k) - log_factorial_ext(N - k) + xlogy(k, bs.log_R) +
                     xlogy(N - k, bs.log_T));
}

LogWeight log_f_i(std::int64_t n, std::int64_t i, const GainParams& gain, const BeamSplitterParams& bs,
                  int weight_exponent) {
    if (n < 0 || i < 0) return LogWeight::zero();
    const std::int64_t transmitted = 2 * i + 1 - n;
    if (transmitted < 0) return LogWeight::zero();
    if (weight_exponent > 0 && transmitted == 0) return LogWeight::zero();
    const long double lf_odd = log_factorial_ext(2 * i + 1);
    long double v = -gain.log_cosh_sq + xlogy(i, gain.log_quarter_z) + 2.0L * lf_odd - 2.0L * log_factorial_ext(i) -
                    log_factorial_ext(n) - log_factorial_ext(transmitted) + xlogy(n, bs.log_R) +
                    xlogy(transmitted, bs.log_T);
    if (weight_exponent > 0) v += weight_exponent * std::log(static_cast<long double>(transmitted));
    return to_weight(v);
}

LogWeight log_f_j(std::int64_t m_occ, std::int64_t j, const GainParams& gain, const BeamSplitterParams& bs,
                  int weight_exponent) {
    if (m_occ < 0 || j < 0) return LogWeight::zero();
    const std::int64_t transmitted = 2 * j - m_occ;
    if (transmitted < 0) return LogWeight::zero();
    if (weight_exponent > 0 && transmitted == 0) return LogWeight::zero();
    // C^2 gamma_0j^2 binom(2j, m) R^m T^(2j-m)
    const long double lf_even = log_factorial_ext(2 * j);
    long double v = -gain.log_cosh_sq + xlogy(j, gain.log_quarter_z) + 2.0L * lf_even - 2.0L * log_factorial_ext(j) -
                    log_factorial_ext(m_occ) - log_factorial_ext(transmitted) + xlogy(m_occ, bs.log_R) +
                    xlogy(transmitted, bs.log_T);
    if (weight_exponent > 0) v += weight_exponent * std::log(static_cast<long double>(transmitted));
    return to_weight(v);
}

}  // namespace mqs
