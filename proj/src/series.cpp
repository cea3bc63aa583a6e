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

#include "mqs/series.hpp"

#include <cmath>

namespace mqs {

std::int64_t term_peak_index(std::int64_t n, const GainParams& gain, const BeamSplitterParams& bs) {
    const std::int64_t first = n / 2;
    if (bs.R <= 0.0 || bs.R >= 1.0 || gain.z <= 0.0) return first;

    // d/di ln f_i(n, i) = 0  <=>
    //   psi(2i+2-n) = ln(z T^2 / 4) / 2 + 2 psi(2i+2) - psi(i+1)
    const double half_log_ratio = 0.5 * static_cast<double>(gain.log_quarter_z + 2.0L * bs.log_T);
    const double nd = static_cast<double>(n);
    const double contraction = bs.T * gain.tanh_g;
    double i = std::max(0.5 * nd, 0.5 * nd / (1.0 - contraction));
    for (int iter = 0; iter < 100000; ++iter) {
        const double rhs = half_log_ratio + 2.0 * digamma(2.0 * i + 2.0) - digamma(i + 1.0);
        const double next = std::max(0.5 * nd, 0.5 * (inverse_digamma(rhs) + nd - 2.0));
        const bool done = std::abs(next - i) <= 1e-9 * (1.0 + next);
        i = next;
        if (done) break;
    }
    return std::max(first, static_cast<std::int64_t>(std::llround(i)));
}

SeriesResult sum_A(std::int64_t n, const GainParams& gain, const BeamSplitterParams& bs, int weight_exponent,
                   const PrecisionConfig& prec) {
    return sum_dynamic([&](std::int64_t i) { return log_f_i(n, i, gain, bs, weight_exponent); }, n / 2, prec);
}

SeriesResult sum_B(std::int64_t m_occ, const GainParams& gain, const BeamSplitterParams& bs, int weight_exponent,
                   const PrecisionConfig& prec) {
    return sum_dynamic([&](std::int64_t j) { return log_f_j(m_occ, j, gain, bs, weight_exponent); }, (m_occ + 1) / 2,
                       prec);
}

SeriesResult sum_G(std::int64_t n, const GainParams& gain, const PrecisionConfig& prec) {
    const LogWeight c2 = LogWeight::from_log(static_cast<double>(gain.log_cosh_sq));
    return sum_dynamic([&](std::int64_t i) { return c2 * log_sq_gamma_i0(i, gain); }, n, prec);
}

SeriesResult sum_Gbar(std::int64_t m_occ, const GainParams& gain, const PrecisionConfig& prec) {
    const LogWeight c2 = LogWeight::from_log(static_cast<double>(gain.log_cosh_sq));
    return sum_dynamic([&](std::int64_t j) { return c2 * log_sq_gamma_0j(j, gain); }, m_occ, prec);
}

TablePair precompute_tables(std::int64_t max_needed, const GainParams& gain, const BeamSplitterParams& bs,
                            int weight_p, int weight_q, const PrecisionConfig& prec) {
    if (max_needed < 0) throw DomainError("precompute_tables: max_needed must be >= 0");
    TablePair out;
    out.A = build_table([&](std::int64_t n) { return sum_A(n, gain, bs, weight_p, prec); }, max_needed, prec);
    out.B = build_table([&](std::int64_t m) { return sum_B(m, gain, bs, weight_q, prec); }, max_needed, prec);
    return out;
}

namespace {

SeriesResult single_term(std::int64_t index, LogWeight v) {
    SeriesResult r;
    r.log_value = v;
    r.first_index = r.last_index = r.peak_index = index;
    return r;
}

}  // namespace

TablePair precompute_gamma_tables(std::int64_t max_needed, const GainParams& gain, int weight_p, int weight_q,
                                  const PrecisionConfig& prec) {
    if (max_needed < 0) throw DomainError("precompute_gamma_tables: max_needed must be >= 0");
    const LogWeight c2 = LogWeight::from_log(static_cast<double>(gain.log_cosh_sq));
    auto weight = [](std::int64_t photons, int exponent) {
        if (exponent == 0) return LogWeight::one();
        return LogWeight::from_log(exponent * std::log(static_cast<double>(photons)));
    };
    TablePair out;
    out.A = build_table(
        [&](std::int64_t i) { return single_term(i, c2 * log_sq_gamma_i0(i, gain) * weight(2 * i + 1, weight_p)); },
        max_needed, prec);
    out.B = build_table(
        [&](std::int64_t j) { return single_term(j, c2 * log_sq_gamma_0j(j, gain) * weight(2 * j, weight_q)); },
        max_needed, prec);
    return out;
}

}  // namespace mqs
