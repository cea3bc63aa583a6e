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
#include <optional>
#include <variant>
#include <vector>

#include "mqs/hyperterms.hpp"
#include "mqs/series.hpp"

namespace mqs {

/// Projective filter keeping components with k + l >= sigma.
struct Theoretical {
    std::int64_t sigma = 0;
};

/// Weak-measurement filter: the reflected beam must carry at least
/// sigma_prime photons; the transmitted beam is kept.
struct BeamSplitter {
    std::int64_t sigma_prime = 0;
    BeamSplitterParams bs;
};

using Preselection = std::variant<Theoretical, BeamSplitter>;

enum class SumStrategy { automatic, tail, complement };

/// Where the automatic strategy switches from the finite complement form to
/// the tail form. The complement form is also abandoned when the preselected
/// mass is below `min_complement_fraction` of the total, where its
/// subtraction would cancel most significant digits.
struct StrategyThresholds {
    std::int64_t theoretical = 5000;
    std::int64_t beam_splitter = 500;
    double min_complement_fraction = 1e-3;
};

/// S = sum_{n+m >= sigma_prime} A(n) B(m).
///
/// tail: sum_{s >= sigma_prime} sum_{m <= s} A(s-m) B(m), over the tables' extent.
/// complement: (sum A)(sum B) - sum_{n+m < sigma_prime} A(n) B(m).
/// `exact_total`, when given, replaces (sum A)(sum B) in the complement form;
/// unweighted tables sum to exactly 1.
/// Throws RangeError when a table was built for a smaller threshold.
double s_sum(const SeriesTable& A, const SeriesTable& B, std::int64_t sigma_prime, SumStrategy strategy,
             std::int64_t switch_threshold = 500, double min_complement_fraction = 1e-3,
             std::optional<double> exact_total = std::nullopt);

/// Smallest i + j kept by theoretical preselection with threshold sigma.
constexpr std::int64_t theoretical_index_threshold(std::int64_t sigma) { return sigma <= 0 ? 0 : sigma / 2; }

/// |N_Th|^2. Throws DegeneratePreselection when nothing survives.
double norm_th(const GainParams& gain, std::int64_t sigma, const PrecisionConfig& prec = {},
               SumStrategy strategy = SumStrategy::automatic, const StrategyThresholds& thresholds = {});

/// |N_BS|^2. Throws DegeneratePreselection when nothing survives.
double norm_bs(const GainParams& gain, const BeamSplitterParams& bs, std::int64_t sigma_prime,
               const PrecisionConfig& prec = {}, SumStrategy strategy = SumStrategy::automatic,
               const StrategyThresholds& thresholds = {});

/// |N|^2 for either preselection mode.
double norm_sq(const GainParams& gain, const Preselection& presel, const PrecisionConfig& prec = {},
               SumStrategy strategy = SumStrategy::automatic, const StrategyThresholds& thresholds = {});

struct ModelConfig {
    GainParams gain;
    Preselection presel;
    PrecisionConfig prec;
    double norm_sq = 1.0;  ///< |N|^2, computed once and injected

    void validate() const;
};

/// Preselected photon-number distribution p_Phi(k, l).
///
/// Holds the per-model precomputations; immutable after construction and
/// safe to share between threads.
class Distribution {
public:
    explicit Distribution(ModelConfig config);

    const ModelConfig& config() const { return config_; }
    bool is_theoretical() const { return std::holds_alternative<Theoretical>(config_.presel); }

    /// p_Phi(k, l); the orthogonal state has p_Phi_perp(k, l) = p(l, k).
    double p(std::int64_t k, std::int64_t l) const;
    LogWeight log_p(std::int64_t k, std::int64_t l) const;

    /// Row-major values of p over [k0, k0+rows) x [l0, l0+cols).
    std::vector<double> evaluate_block(std::int64_t k0, std::int64_t rows, std::int64_t l0, std::int64_t cols,
                                       unsigned workers = 1) const;

private:
    // Reflected-photon profile for one transmitted count. Entry r holds the
    // scaled weight for reflected count first + 2r.
    struct Profile {
        std::int64_t first = 0;
        double log_scale = 0.0;
        std::vector<double> weights;
    };
    Profile single_branch_profile(std::int64_t k) const;
    Profile vacuum_branch_suffix(std::int64_t l) const;
    LogWeight combine(const Profile& row, const Profile& col_suffix) const;

    ModelConfig config_;
    double log_norm_sq_ = 0.0;
};

/// p_Phi^(Th)(k, l)
double p_th(std::int64_t k, std::int64_t l, const ModelConfig& model);

/// p_Phi^(BS)(k, l); builds a Distribution for a single query.
double p_bs(std::int64_t k, std::int64_t l, const ModelConfig& model);

/// E[k^p l^q] under the preselected distribution, from moment-weighted
/// marginal tables and the thresholded double sum.
double moment_sum(const ModelConfig& model, int p, int q, SumStrategy strategy = SumStrategy::automatic,
                  const StrategyThresholds& thresholds = {});

}  // namespace mqs
