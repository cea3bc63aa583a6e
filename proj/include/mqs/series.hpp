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
#include <concepts>
#include <cstdint>
#include <vector>

#include "mqs/errors.hpp"
#include "mqs/hyperterms.hpp"
#include "mqs/log_weight.hpp"
#include "mqs/special_math.hpp"

namespace mqs {

/// Target relative precision of series truncation.
struct PrecisionConfig {
    double eps_rel = 1e-15;

    void validate() const {
        if (!(eps_rel > 0.0 && eps_rel < 1.0)) throw DomainError("eps_rel must lie in (0, 1)");
    }
};

/// A dynamically truncated sum and the indices that bounded it.
struct SeriesResult {
    LogWeight log_value;
    std::int64_t first_index = 0;
    std::int64_t last_index = 0;
    std::int64_t peak_index = 0;

    double value() const { return log_value.value(); }
    std::int64_t term_count() const { return last_index - first_index + 1; }
};

/// Terms beyond this many are treated as a non-convergent series.
inline constexpr std::int64_t kMaxSeriesTerms = 50'000'000;

template <class F>
concept TermGenerator = requires(F f, std::int64_t i) {
    { f(i) } -> std::convertible_to<LogWeight>;
};

/// Sums a unimodal sequence of nonnegative terms starting at `start_index`.
///
/// The scan walks the rising phase until the first term that does not exceed
/// its predecessor, then continues through the falling phase until a term is
/// at most eps_rel times the peak term; that term is the last one included.
/// Each phase is accumulated from its smallest term upward. Up to two leading
/// zero terms are skipped (moment weights vanish at the first index); a series
/// that is still zero after that is reported as exactly zero.
template <TermGenerator Term>
SeriesResult sum_dynamic(Term&& term, std::int64_t start_index, const PrecisionConfig& prec) {
    prec.validate();
    const double log_eps = std::log(prec.eps_rel);
    std::vector<LogWeight> rising;
    std::vector<LogWeight> falling;
    SeriesResult out;
    out.first_index = out.last_index = out.peak_index = start_index;

    LogWeight peak = LogWeight::zero();
    bool descending = false;
    int leading_zeros = 0;
    for (std::int64_t i = start_index;; ++i) {
        if (i - start_index > kMaxSeriesTerms) throw Error("sum_dynamic: series did not converge");
        const LogWeight t = term(i);
        if (!descending) {
            if (t.is_zero() && rising.empty()) {
                if (++leading_zeros > 2) {
                    out.last_index = i;
                    return out;
                }
                continue;
            }
            if (t > peak) {
                rising.push_back(t);
                peak = t;
                out.peak_index = i;
                continue;
            }
            descending = true;
        }
        falling.push_back(t);
        if (t.is_zero() || t.log() - peak.log() <= log_eps) {
            out.last_index = i;
            break;
        }
    }
    std::reverse(falling.begin(), falling.end());
    const LogWeight up = accumulate_ascending(rising);
    const LogWeight down = accumulate_ascending(falling);
    const LogWeight parts[] = {std::min(up, down), std::max(up, down)};
    out.log_value = accumulate_ascending(parts);
    return out;
}

/// Index of the largest term f_i(n, .) from the continuous stationarity
/// condition, solved with inverse digamma. Falls back to floor(n/2) when the
/// beam splitter is fully reflecting or fully transmitting or the gain is 0.
std::int64_t term_peak_index(std::int64_t n, const GainParams& gain, const BeamSplitterParams& bs);

/// A(n) = sum_{i >= floor(n/2)} f_i(n, i) (2i+1-n)^p
SeriesResult sum_A(std::int64_t n, const GainParams& gain, const BeamSplitterParams& bs, int weight_exponent,
                   const PrecisionConfig& prec);

/// B(m) = sum_{j >= floor((m+1)/2)} f_j(m, j) (2j-m)^q
SeriesResult sum_B(std::int64_t m_occ, const GainParams& gain, const BeamSplitterParams& bs, int weight_exponent,
                   const PrecisionConfig& prec);

/// G(n) = sum_{i >= n} C^2 gamma_{i0}^2
SeriesResult sum_G(std::int64_t n, const GainParams& gain, const PrecisionConfig& prec);

/// Gbar(m) = sum_{j >= m} C^2 gamma_{0j}^2
SeriesResult sum_Gbar(std::int64_t m_occ, const GainParams& gain, const PrecisionConfig& prec);

/// Precomputed marginal table, entries 0..cutoff() inclusive.
///
/// `reference` is the entry at `max_needed`, or the largest entry so far
/// while that one is zero. `terminal` is the first entry past `max_needed` whose
/// geometric tail estimate is negligible against the reference; it is not
/// part of the table.
struct SeriesTable {
    std::vector<LogWeight> log_values;
    std::vector<double> values;
    LogWeight reference;
    LogWeight terminal;
    std::int64_t max_needed = 0;
    std::int64_t series_terms = 0;

    std::int64_t cutoff() const { return static_cast<std::int64_t>(values.size()) - 1; }
    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
    double at(std::int64_t n) const { return n >= 0 && n < size() ? values[static_cast<std::size_t>(n)] : 0.0; }
};

/// Builds a table by evaluating `entry(n)` for n = 0, 1, ... and stopping at
/// the first n > max_needed whose entry is zero, or is decreasing with
/// entry / (1 - ratio) at most eps_rel times the reference, where ratio is the
/// quotient of the entry and its predecessor.
template <class Entry>
SeriesTable build_table(Entry&& entry, std::int64_t max_needed, const PrecisionConfig& prec) {
    prec.validate();
    const double log_eps = std::log(prec.eps_rel);
    SeriesTable table;
    table.max_needed = max_needed;
    LogWeight prev = LogWeight::zero();
    LogWeight largest = LogWeight::zero();
    for (std::int64_t n = 0;; ++n) {
        if (n > kMaxSeriesTerms) throw Error("build_table: table did not terminate");
        const SeriesResult r = entry(n);
        table.series_terms += r.term_count();
        const LogWeight v = r.log_value;
        if (n > max_needed) {
            bool negligible = v.is_zero();
            if (!negligible && v < prev) {
                const double log_ratio = v.log() - prev.log();
                const double log_tail = v.log() - std::log(-std::expm1(log_ratio));
                negligible = log_tail - table.reference.log() <= log_eps;
            }
            if (negligible) {
                table.terminal = v;
                break;
            }
        }
        table.log_values.push_back(v);
        table.values.push_back(v.value());
        largest = std::max(largest, v);
        if (n == max_needed) table.reference = v.is_zero() ? largest : v;
        if (n > max_needed && table.reference.is_zero()) table.reference = largest;
        prev = v;
    }
    return table;
}

/// A and B tables for beam-splitter preselection with threshold max_needed.
struct TablePair {
    SeriesTable A;
    SeriesTable B;
};

TablePair precompute_tables(std::int64_t max_needed, const GainParams& gain, const BeamSplitterParams& bs,
                            int weight_p, int weight_q, const PrecisionConfig& prec);

/// Tables of C^2 gamma_{i0}^2 (2i+1)^p and C^2 gamma_{0j}^2 (2j)^q, the
/// theoretical-preselection counterparts of A and B.
TablePair precompute_gamma_tables(std::int64_t max_needed, const GainParams& gain, int weight_p, int weight_q,
                                  const PrecisionConfig& prec);

}  // namespace mqs
