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
#include <span>
#include <vector>

#include "mqs/preselection.hpp"

namespace mqs {

/// Rectangle [k0, k0+rows) x [l0, l0+cols) of the photon-number plane.
struct Region {
    std::int64_t k0 = 0;
    std::int64_t l0 = 0;
    std::int64_t rows = 0;
    std::int64_t cols = 0;

    std::int64_t k_end() const { return k0 + rows; }
    std::int64_t l_end() const { return l0 + cols; }
    std::int64_t cells() const { return rows * cols; }
    bool contains(std::int64_t k, std::int64_t l) const { return k >= k0 && k < k_end() && l >= l0 && l < l_end(); }
    friend bool operator==(const Region&, const Region&) = default;
};

/// Row-major values over a region; row index is k, column index is l.
struct Grid {
    Region region;
    std::vector<double> values;

    Grid() = default;
    explicit Grid(Region r) : region(r), values(static_cast<std::size_t>(r.cells()), 0.0) {}

    double at(std::int64_t k, std::int64_t l) const {
        return values[static_cast<std::size_t>((k - region.k0) * region.cols + (l - region.l0))];
    }
    double& at(std::int64_t k, std::int64_t l) {
        return values[static_cast<std::size_t>((k - region.k0) * region.cols + (l - region.l0))];
    }
    /// Value at (k, l), zero outside the region.
    double value_or_zero(std::int64_t k, std::int64_t l) const { return region.contains(k, l) ? at(k, l) : 0.0; }
};

/// Tile (x, y) covers k in [x*size, (x+1)*size) and l in [y*size, (y+1)*size).
/// Evaluation extends `margin` cells beyond that on every side, clamped at 0.
struct TileSpec {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t size = 1;
    std::int64_t margin = 0;

    Region interior() const { return {x * size, y * size, size, size}; }
    Region padded() const;
    TileSpec mirror() const { return {y, x, size, margin}; }
    bool diagonal() const { return x == y; }
};

/// Blur width 3*sigma_bar of the default detector-resolution set.
inline const std::vector<double> kDefaultThreeSigmas = {1.0, 1.5, 15.0, 150.0};

/// Cells needed around a tile for the widest blur in `three_sigmas`.
std::int64_t required_margin(std::span<const double> three_sigmas);

struct BlurOverlap {
    double three_sigma = 0.0;
    double sum = 0.0;
    friend bool operator==(const BlurOverlap&, const BlurOverlap&) = default;
};

/// Per-work-item accumulators. A work item covers a tile and, when off the
/// diagonal, its mirror tile; every field includes both.
struct TilePartial {
    double prob_sum = 0.0;
    double overlap_sum = 0.0;
    std::vector<BlurOverlap> blur_overlap_sums;
    double sum_k = 0.0;
    double sum_l = 0.0;
    double sum_k2 = 0.0;
    double sum_l2 = 0.0;
    double sum_kl = 0.0;
    double max_p = 0.0;

    friend bool operator==(const TilePartial&, const TilePartial&) = default;
};

struct TileResult {
    TilePartial partial;
    Grid grid;                        ///< p_Phi on tile (x, y)
    std::optional<Grid> mirror_grid;  ///< p_Phi on tile (y, x), off-diagonal only
    std::int64_t evaluations = 0;     ///< distribution points computed, margins included
};

/// Evaluates one work item. Throws DomainError when the margin is narrower
/// than the widest blur.
TileResult compute_tile(const TileSpec& spec, const Distribution& dist, std::span<const double> three_sigmas,
                        unsigned workers = 1);

/// Weierstrass transform of `padded` with standard deviation sigma_bar,
/// evaluated on `interior`:
///   p'(k,l) = 1/(2 pi sigma_bar^2) sum_{|p|,|q| <= 3 sigma_bar} p(k-p, l-q) exp(-(p^2+q^2)/(2 sigma_bar^2))
/// Cells with a negative coordinate contribute zero.
Grid blur_weierstrass(const Grid& padded, double sigma_bar, const Region& interior);

/// Smallest sampled K with p_Phi(K, 0) below eps and no longer rising. The
/// scan starts at 30m (beam splitter) or 20m (theoretical) in steps of 100.
std::int64_t find_cutoff_KL(const Distribution& dist, double eps);

/// How gathered moments are normalized: by 1 (raw sums over the grid) or by
/// the probability mass captured by the grid.
enum class MomentNormalization { raw, captured };

struct IndicatorReport {
    double total_prob = 0.0;
    double visibility_overlap = 0.0;
    std::vector<BlurOverlap> visibility_blurred;  ///< (3 sigma_bar, visibility)
    double mean = 0.0;
    double mean_k = 0.0;
    double mean_l = 0.0;
    double variance = 0.0;
    double variance_k = 0.0;
    double variance_l = 0.0;
    double max_p = 0.0;
    MomentNormalization normalization = MomentNormalization::raw;
};

struct PlacedPartial {
    std::int64_t x = 0;
    std::int64_t y = 0;
    TilePartial partial;
};

/// Combines work-item partials covering a grid_side x grid_side tile grid.
/// Either orientation of an off-diagonal pair may be supplied. Throws
/// MissingTile for a hole and Error when no probability was captured.
IndicatorReport gather(std::span<const PlacedPartial> partials, std::int64_t grid_side,
                       MomentNormalization normalization = MomentNormalization::raw);

}  // namespace mqs
