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

#include "mqs/preselection.hpp"

#include <cmath>
#include <string>

#include "mqs/parallel.hpp"

namespace mqs {

namespace {

// Sum of a in ascending index order; tables are short enough that the
// ordering, not compensation, dominates the rounding.
double table_total(const SeriesTable& t) {
    double s = 0.0;
    for (auto it = t.values.rbegin(); it != t.values.rend(); ++it) s += *it;
    return s;
}

double tail_form(const SeriesTable& A, const SeriesTable& B, std::int64_t sigma_prime) {
    const std::int64_t N = A.cutoff();
    const std::int64_t M = B.cutoff();
    double S = 0.0;
    for (std::int64_t s = std::max<std::int64_t>(sigma_prime, 0); s <= N + M; ++s) {
        double inner = 0.0;
        for (std::int64_t m = std::max<std::int64_t>(0, s - N); m <= std::min(s, M); ++m) inner += A.at(s - m) * B.at(m);
        S += inner;
    }
    return S;
}

// Neumaier-compensated running sum; the complement form subtracts its
// result from the exact total, so every ulp of the partial survives.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

double complement_partial(const SeriesTable& A, const SeriesTable& B, std::int64_t sigma_prime) {
    CompensatedSum partial;
    CompensatedSum b_prefix;
    std::vector<double> prefix(static_cast<std::size_t>(std::max<std::int64_t>(sigma_prime, 0)));
    for (std::int64_t m = 0; m < sigma_prime; ++m) {
        b_prefix.add(B.at(m));
        prefix[static_cast<std::size_t>(m)] = b_prefix.value();
    }
    for (std::int64_t n = 0; n < sigma_prime; ++n) partial.add(A.at(n) * prefix[static_cast<std::size_t>(sigma_prime - 1 - n)]);
    return partial.value();
}

double checked_norm(double S, const char* mode, std::int64_t threshold) {
    if (!(S > 0.0) || !std::isfinite(S))
        throw DegeneratePreselection(std::string(mode) + " preselection with threshold " + std::to_string(threshold) +
                                     " leaves no probability mass");
    return 1.0 / S;
}

}  // namespace

double s_sum(const SeriesTable& A, const SeriesTable& B, std::int64_t sigma_prime, SumStrategy strategy,
             std::int64_t switch_threshold, double min_complement_fraction, std::optional<double> exact_total) {
    if (A.max_needed < sigma_prime || B.max_needed < sigma_prime)
        throw RangeError("s_sum: tables built for threshold " + std::to_string(std::min(A.max_needed, B.max_needed)) +
                         " cannot serve threshold " + std::to_string(sigma_prime));
    if (strategy == SumStrategy::tail) return tail_form(A, B, sigma_prime);
    const double total = exact_total ? *exact_total : table_total(A) * table_total(B);
    if (strategy == SumStrategy::complement) return total - complement_partial(A, B, sigma_prime);
    if (sigma_prime > switch_threshold) return tail_form(A, B, sigma_prime);
    const double S = total - complement_partial(A, B, sigma_prime);
    if (S < min_complement_fraction * total) return tail_form(A, B, sigma_prime);
    return S;
}

double norm_th(const GainParams& gain, std::int64_t sigma, const PrecisionConfig& prec, SumStrategy strategy,
               const StrategyThresholds& thresholds) {
    if (sigma < 0) throw DomainError("norm_th: sigma must be >= 0");
    const std::int64_t s = theoretical_index_threshold(sigma);
    const TablePair t = precompute_gamma_tables(s, gain, 0, 0, prec);
    return checked_norm(s_sum(t.A, t.B, s, strategy, thresholds.theoretical / 2, thresholds.min_complement_fraction, 1.0),
                        "theoretical", sigma);
}

double norm_bs(const GainParams& gain, const BeamSplitterParams& bs, std::int64_t sigma_prime,
               const PrecisionConfig& prec, SumStrategy strategy, const StrategyThresholds& thresholds) {
    if (sigma_prime < 0) throw DomainError("norm_bs: sigma_prime must be >= 0");
    const TablePair t = precompute_tables(sigma_prime, gain, bs, 0, 0, prec);
    return checked_norm(
        s_sum(t.A, t.B, sigma_prime, strategy, thresholds.beam_splitter, thresholds.min_complement_fraction, 1.0),
        "beam-splitter", sigma_prime);
}

double norm_sq(const GainParams& gain, const Preselection& presel, const PrecisionConfig& prec, SumStrategy strategy,
               const StrategyThresholds& thresholds) {
    if (const auto* th = std::get_if<Theoretical>(&presel)) return norm_th(gain, th->sigma, prec, strategy, thresholds);
    const auto& b = std::get<BeamSplitter>(presel);
    return norm_bs(gain, b.bs, b.sigma_prime, prec, strategy, thresholds);
}

void ModelConfig::validate() const {
    prec.validate();
    if (!(norm_sq > 0.0) || !std::isfinite(norm_sq)) throw DomainError("squared normalization must be positive");
    if (norm_sq < 1.0 - 1e-12) throw DomainError("squared normalization below 1 is inconsistent (|N|^-2 <= 1)");
    if (const auto* th = std::get_if<Theoretical>(&presel); th && th->sigma < 0)
        throw DomainError("preselection threshold must be >= 0");
    if (const auto* b = std::get_if<BeamSplitter>(&presel); b && b->sigma_prime < 0)
        throw DomainError("preselection threshold must be >= 0");
}

Distribution::Distribution(ModelConfig config) : config_(std::move(config)) {
    config_.validate();
    log_norm_sq_ = std::log(config_.norm_sq);
}

namespace {

// Scans a unimodal sequence v(first), v(first+2), ... with the same stopping
// rule as sum_dynamic and returns the log values.
template <class Fn>
std::vector<double> scan_profile(Fn&& value, double log_eps) {
    std::vector<double> logs;
    double peak = -INFINITY;
    bool descending = false;
    int leading_zeros = 0;
    for (std::int64_t r = 0;; ++r) {
        if (r > kMaxSeriesTerms) throw Error("photon-number profile did not converge");
        const double lv = value(r).log();
        if (!descending) {
            if (lv == -INFINITY && peak == -INFINITY) {
                if (++leading_zeros > 2) return {};
                logs.push_back(lv);
                continue;
            }
            if (lv > peak) {
                logs.push_back(lv);
                peak = lv;
                continue;
            }
            descending = true;
        }
        if (lv == -INFINITY || lv - peak <= log_eps) break;
        logs.push_back(lv);
    }
    return logs;
}

}  // namespace

Distribution::Profile Distribution::single_branch_profile(std::int64_t k) const {
    const auto& b = std::get<BeamSplitter>(config_.presel);
    Profile prof;
    // k + a odd and i = (k + a - 1) / 2 >= 0
    prof.first = k == 0 ? 1 : (k + 1) % 2;
    const auto logs = scan_profile(
        [&](std::int64_t r) {
            const std::int64_t a = prof.first + 2 * r;
            return log_f_i(a, (k + a - 1) / 2, config_.gain, b.bs);
        },
        std::log(config_.prec.eps_rel));
    if (logs.empty()) return prof;
    const double top = *std::max_element(logs.begin(), logs.end());
    prof.log_scale = top;
    prof.weights.reserve(logs.size());
    for (const double lv : logs) prof.weights.push_back(std::exp(lv - top));
    return prof;
}

Distribution::Profile Distribution::vacuum_branch_suffix(std::int64_t l) const {
    const auto& b = std::get<BeamSplitter>(config_.presel);
    Profile prof;
    prof.first = l % 2;
    const auto logs = scan_profile(
        [&](std::int64_t r) {
            const std::int64_t m = prof.first + 2 * r;
            return log_f_j(m, (l + m) / 2, config_.gain, b.bs);
        },
        std::log(config_.prec.eps_rel));
    if (logs.empty()) return prof;
    const double top = *std::max_element(logs.begin(), logs.end());
    prof.log_scale = top;
    prof.weights.resize(logs.size());
    double suffix = 0.0;
    for (std::size_t r = logs.size(); r-- > 0;) {
        suffix += std::exp(logs[r] - top);
        prof.weights[r] = suffix;
    }
    return prof;
}

LogWeight Distribution::combine(const Profile& row, const Profile& col_suffix) const {
    if (row.weights.empty() || col_suffix.weights.empty()) return LogWeight::zero();
    const std::int64_t sigma_prime = std::get<BeamSplitter>(config_.presel).sigma_prime;
    const auto n_col = static_cast<std::int64_t>(col_suffix.weights.size());
    double sum = 0.0;
    for (std::size_t r = 0; r < row.weights.size(); ++r) {
        const std::int64_t a = row.first + 2 * static_cast<std::int64_t>(r);
        const std::int64_t b_min = std::max<std::int64_t>(0, sigma_prime - a);
        const std::int64_t rb = b_min <= col_suffix.first ? 0 : (b_min - col_suffix.first + 1) / 2;
        if (rb >= n_col) continue;
        sum += row.weights[r] * col_suffix.weights[static_cast<std::size_t>(rb)];
    }
    if (!(sum > 0.0)) return LogWeight::zero();
    return LogWeight::from_log(log_norm_sq_ + row.log_scale + col_suffix.log_scale + std::log(sum));
}

LogWeight Distribution::log_p(std::int64_t k, std::int64_t l) const {
    if (k < 0 || l < 0) return LogWeight::zero();
    if (const auto* th = std::get_if<Theoretical>(&config_.presel)) {
        if (k % 2 == 0 || l % 2 == 1 || k + l < th->sigma) return LogWeight::zero();
        return LogWeight::from_log(log_norm_sq_) * log_sq_gamma((k - 1) / 2, l / 2, config_.gain);
    }
    return combine(single_branch_profile(k), vacuum_branch_suffix(l));
}

double Distribution::p(std::int64_t k, std::int64_t l) const { return log_p(k, l).value(); }

std::vector<double> Distribution::evaluate_block(std::int64_t k0, std::int64_t rows, std::int64_t l0,
                                                 std::int64_t cols, unsigned workers) const {
    if (k0 < 0 || l0 < 0 || rows < 0 || cols < 0) throw DomainError("evaluate_block: negative extent");
    std::vector<double> out(static_cast<std::size_t>(rows * cols), 0.0);
    if (is_theoretical()) {
        parallel_for(rows, workers, [&](std::int64_t r) {
            for (std::int64_t c = 0; c < cols; ++c)
                out[static_cast<std::size_t>(r * cols + c)] = p(k0 + r, l0 + c);
        });
        return out;
    }
    std::vector<Profile> col_profiles(static_cast<std::size_t>(cols));
    parallel_for(cols, workers,
                 [&](std::int64_t c) { col_profiles[static_cast<std::size_t>(c)] = vacuum_branch_suffix(l0 + c); });
    parallel_for(rows, workers, [&](std::int64_t r) {
        const Profile row = single_branch_profile(k0 + r);
        for (std::int64_t c = 0; c < cols; ++c)
            out[static_cast<std::size_t>(r * cols + c)] = combine(row, col_profiles[static_cast<std::size_t>(c)]).value();
    });
    return out;
}

double p_th(std::int64_t k, std::int64_t l, const ModelConfig& model) {
    if (!std::holds_alternative<Theoretical>(model.presel)) throw DomainError("p_th requires theoretical preselection");
    return Distribution(model).p(k, l);
}

double p_bs(std::int64_t k, std::int64_t l, const ModelConfig& model) {
    if (!std::holds_alternative<BeamSplitter>(model.presel)) throw DomainError("p_bs requires beam-splitter preselection");
    return Distribution(model).p(k, l);
}

namespace {

std::optional<double> unit_total(int p, int q) {
    if (p == 0 && q == 0) return 1.0;
    return std::nullopt;
}

}  // namespace

double moment_sum(const ModelConfig& model, int p, int q, SumStrategy strategy, const StrategyThresholds& thresholds) {
    if (p < 0 || q < 0) throw DomainError("moment exponents must be >= 0");
    model.validate();
    if (const auto* th = std::get_if<Theoretical>(&model.presel)) {
        const std::int64_t s = theoretical_index_threshold(th->sigma);
        const TablePair t = precompute_gamma_tables(s, model.gain, p, q, model.prec);
        return model.norm_sq * s_sum(t.A, t.B, s, strategy, thresholds.theoretical / 2,
                                     thresholds.min_complement_fraction, unit_total(p, q));
    }
    const auto& b = std::get<BeamSplitter>(model.presel);
    const TablePair t = precompute_tables(b.sigma_prime, model.gain, b.bs, p, q, model.prec);
    return model.norm_sq * s_sum(t.A, t.B, b.sigma_prime, strategy, thresholds.beam_splitter,
                                 thresholds.min_complement_fraction, unit_total(p, q));
}

}  // namespace mqs
