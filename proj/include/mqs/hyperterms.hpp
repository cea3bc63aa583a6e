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

#include "mqs/log_weight.hpp"

namespace mqs {

/// Amplification gain of the phase-covariant cloner and the constants
/// derived from it.
struct GainParams {
    double g = 0.0;       ///< gain
    double m = 0.0;       ///< sinh^2 g
    double cosh_g = 1.0;  ///< C_g
    double tanh_g = 0.0;  ///< T_g
    double z = 0.0;       ///< T_g^2

    long double log_cosh_sq = 0.0L;  ///< ln C_g^2
    long double log_quarter_z = 0.0L;  ///< ln(z/4), -inf at g = 0

    /// Parameterization by m = sinh^2 g, as used on the command line.
    static GainParams from_mean(double m);
    static GainParams from_gain(double g);
};

/// Beam splitter with reflectivity R and transmittivity T = 1 - R.
struct BeamSplitterParams {
    double R = 0.0;
    double T = 1.0;
    long double log_R = 0.0L;
    long double log_T = 0.0L;

    static BeamSplitterParams from_reflectivity(double R);
};

/// ln(gamma_{i0}^2) = ln(C^-4 (z/4)^i (2i+1)! / i!^2)
LogWeight log_sq_gamma_i0(std::int64_t i, const GainParams& gain);

/// ln(gamma_{0j}^2) = ln(C^-4 (z/4)^j (2j)! / j!^2)
LogWeight log_sq_gamma_0j(std::int64_t j, const GainParams& gain);

/// ln(gamma_{ij}^2), using gamma_ij = C^2 gamma_i0 gamma_0j.
LogWeight log_sq_gamma(std::int64_t i, std::int64_t j, const GainParams& gain);

/// Squared beam-splitter amplitude binom(N,k) R^k T^(N-k); zero outside 0 <= k <= N.
LogWeight log_bs_coeff_sq(std::int64_t k, std::int64_t N, const BeamSplitterParams& bs);

/// f_i(n, i) (2i+1-n)^p: single photon branch with n photons reflected.
///
/// Zero when n > 2i+1, and for p > 0 when nothing is transmitted.
LogWeight log_f_i(std::int64_t n, std::int64_t i, const GainParams& gain, const BeamSplitterParams& bs,
                  int weight_exponent = 0);

/// f_j(m, j) (2j-m)^q: vacuum branch with m photons reflected.
LogWeight log_f_j(std::int64_t m_occ, std::int64_t j, const GainParams& gain, const BeamSplitterParams& bs,
                  int weight_exponent = 0);

}  // namespace mqs
