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

#include "mqs/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "mqs/errors.hpp"

namespace mqs {

namespace {

constexpr double kWindowSlack = 1e-9;

std::int64_t half_window(double three_sigma) {
    return static_cast<std::int64_t>(std::floor(three_sigma + kWindowSlack));
}

// sqrt(a b) through logarithms so products of tiny probabilities do not underflow
double geometric_mean(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) return 0.0;
    return std::exp(0.5 * (std::log(a) + std::log(b)));
}

Grid evaluate(const Distribution& dist, const Region& r, unsigned workers) {
    Grid g(r);
    g.values = dist.evaluate_block(r.k0, r.rows, r.l0, r.cols, workers);
    return g;
}

// Overlap of a grid pair over `interior`: sum of sqrt(p(k,l) p(l,k)), with
// p(l,k) read from `mirror`. Diagonal tiles use the split form that visits
// each unordered pair once.
double overlap(const Grid& grid, const Grid& mirror, const Region& interior, bool diagonal) {
    double sum = 0.0;
    if (diagonal) {
        for (std::int64_t k = interior.k0; k < interior.k_end(); ++k) {
            sum += grid.at(k, k);
            double row = 0.0;
            for (std::int64_t l = interior.l0; l < k; ++l) row += geometric_mean(grid.at(k, l), grid.at(l, k));
            sum += 2.0 * row;
        }
        return sum;
    }
    for (std::int64_t k = interior.k0; k < interior.k_end(); ++k)
        for (std::int64_t l = interior.l0; l < interior.l_end(); ++l)
            sum += geometric_mean(grid.at(k, l), mirror.at(l, k));
    return 2.0 * sum;
}

void accumulate_moments(const Grid& grid, const Region& interior, TilePartial& out) {
    for (std::int64_t k = interior.k0; k < interior.k_end(); ++k) {
        const auto kd = static_cast<double>(k);
        for (std::int64_t l = interior.l0; l < interior.l_end(); ++l) {
            const double v = grid.at(k, l);
            const auto ld = static_cast<double>(l);
            out.prob_sum += v;
            out.sum_k += kd * v;
            out.sum_l += ld * v;
            out.sum_k2 += kd * kd * v;
            out.sum_l2 += ld * ld * v;
            out.sum_kl += kd * ld * v;
            out.max_p = std::max(out.max_p, v);
        }
    }
}

Grid crop(const Grid& src, const Region& r) {
    Grid out(r);
    for (std::int64_t k = r.k0; k < r.k_end(); ++k)
        for (std::int64_t l = r.l0; l < r.l_end(); ++l) out.at(k, l) = src.at(k, l);
    return out;
}

}  // namespace

Region TileSpec::padded() const {
    if (size <= 0 || x < 0 || y < 0 || margin < 0) throw DomainError("tile spec: size must be positive, indices >= 0");
    const Region in = interior();
    const std::int64_t k0 = std::max<std::int64_t>(0, in.k0 - margin);
    const std::int64_t l0 = std::max<std::int64_t>(0, in.l0 - margin);
    return {k0, l0, in.k_end() + margin - k0, in.l_end() + margin - l0};
}

std::int64_t required_margin(std::span<const double> three_sigmas) {
    std::int64_t margin = 0;
    for (const double ts : three_sigmas) {
        if (!(ts > 0.0)) throw DomainError("blur width must be positive");
        margin = std::max(margin, static_cast<std::int64_t>(std::ceil(ts - kWindowSlack)));
    }
    return margin;
}

Grid blur_weierstrass(const Grid& padded, double sigma_bar, const Region& interior) {
    if (!(sigma_bar > 0.0)) throw DomainError("blur_weierstrass: sigma_bar must be positive");
    const std::int64_t w = half_window(3.0 * sigma_bar);
    const Region& p = padded.region;
    const bool k_ok = (interior.k0 - w >= p.k0 || p.k0 == 0) && interior.k_end() + w <= p.k_end();
    const bool l_ok = (interior.l0 - w >= p.l0 || p.l0 == 0) && interior.l_end() + w <= p.l_end();
    if (!k_ok || !l_ok)
        throw DomainError("blur_weierstrass: margin narrower than 3 sigma_bar = " + std::to_string(3.0 * sigma_bar));

    std::vector<double> kernel(static_cast<std::size_t>(2 * w + 1));
    for (std::int64_t q = -w; q <= w; ++q)
        kernel[static_cast<std::size_t>(q + w)] =
            std::exp(-static_cast<double>(q * q) / (2.0 * sigma_bar * sigma_bar));
    const double scale = 1.0 / (2.0 * std::numbers::pi * sigma_bar * sigma_bar);

    // Separable: convolve along l for every row the k-pass will read.
    const std::int64_t k_lo = std::max(p.k0, interior.k0 - w);
    const Region band{k_lo, interior.l0, interior.k_end() + w - k_lo, interior.cols};
    Grid along_l(band);
    for (std::int64_t k = band.k0; k < band.k_end(); ++k)
        for (std::int64_t l = band.l0; l < band.l_end(); ++l) {
            double s = 0.0;
            for (std::int64_t q = -w; q <= w; ++q)
                s += kernel[static_cast<std::size_t>(q + w)] * padded.value_or_zero(k, l - q);
            along_l.at(k, l) = s;
        }
    Grid out(interior);
    for (std::int64_t k = interior.k0; k < interior.k_end(); ++k)
        for (std::int64_t l = interior.l0; l < interior.l_end(); ++l) {
            double s = 0.0;
            for (std::int64_t q = -w; q <= w; ++q)
                s += kernel[static_cast<std::size_t>(q + w)] * along_l.value_or_zero(k - q, l);
            out.at(k, l) = scale * s;
        }
    return out;
}

TileResult compute_tile(const TileSpec& spec, const Distribution& dist, std::span<const double> three_sigmas,
                        unsigned workers) {
    const std::int64_t needed = required_margin(three_sigmas);
    if (spec.margin < needed)
        throw DomainError("compute_tile: margin " + std::to_string(spec.margin) + " below required " +
                          std::to_string(needed));
    const bool diag = spec.diagonal();
    const TileSpec mirror_spec = spec.mirror();

    const Grid padded = evaluate(dist, spec.padded(), workers);
    const Grid mirror_padded = diag ? Grid() : evaluate(dist, mirror_spec.padded(), workers);
    const Grid& mp = diag ? padded : mirror_padded;

    TileResult result;
    result.evaluations = padded.region.cells() + (diag ? 0 : mirror_padded.region.cells());
    const Region in = spec.interior();
    const Region mirror_in = mirror_spec.interior();

    TilePartial& part = result.partial;
    accumulate_moments(padded, in, part);
    if (!diag) accumulate_moments(mp, mirror_in, part);
    part.overlap_sum = overlap(padded, mp, in, diag);
    for (const double ts : three_sigmas) {
        const double sigma_bar = ts / 3.0;
        const Grid blurred = blur_weierstrass(padded, sigma_bar, in);
        const Grid mirror_blurred = diag ? blurred : blur_weierstrass(mp, sigma_bar, mirror_in);
        part.blur_overlap_sums.push_back({ts, overlap(blurred, mirror_blurred, in, diag)});
    }
    result.grid = crop(padded, in);
    if (!diag) result.mirror_grid = crop(mp, mirror_in);
    return result;
}

std::int64_t find_cutoff_KL(const Distribution& dist, double eps) {
    if (!(eps > 0.0)) throw DomainError("find_cutoff_KL: eps must be positive");
    constexpr std::int64_t kStride = 100;
    const double factor = dist.is_theoretical() ? 20.0 : 30.0;
    std::int64_t k = static_cast<std::int64_t>(std::ceil(factor * dist.config().gain.m));
    // p(k, 0) vanishes for even k under theoretical preselection
    auto sample = [&](std::int64_t at) { return std::max(dist.p(at, 0), dist.p(at + 1, 0)); };
    for (double v = sample(k);; k += kStride) {
        const double next = sample(k + kStride);
        if (v < eps && next <= v) return v == dist.p(k, 0) ? k : k + 1;
        v = next;
    }
}

IndicatorReport gather(std::span<const PlacedPartial> partials, std::int64_t grid_side,
                       MomentNormalization normalization) {
    if (grid_side <= 0) throw DomainError("gather: grid side must be positive");
    std::map<std::pair<std::int64_t, std::int64_t>, const TilePartial*> by_item;
    for (const PlacedPartial& pp : partials) {
        const auto key = std::make_pair(std::max(pp.x, pp.y), std::min(pp.x, pp.y));
        if (!by_item.emplace(key, &pp.partial).second)
            throw Error("gather: tile (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                        ") supplied twice");
    }

    TilePartial total;
    bool first = true;
    for (std::int64_t x = 0; x < grid_side; ++x)
        for (std::int64_t y = 0; y <= x; ++y) {
            const auto it = by_item.find({x, y});
            if (it == by_item.end())
                throw MissingTile(x, y, "gather: missing tile (" + std::to_string(x) + "," + std::to_string(y) + ")");
            const TilePartial& p = *it->second;
            if (first) {
                total.blur_overlap_sums = p.blur_overlap_sums;
                for (auto& b : total.blur_overlap_sums) b.sum = 0.0;
                first = false;
            }
            if (p.blur_overlap_sums.size() != total.blur_overlap_sums.size())
                throw Error("gather: tiles disagree on the set of blur widths");
            for (std::size_t i = 0; i < p.blur_overlap_sums.size(); ++i) {
                if (p.blur_overlap_sums[i].three_sigma != total.blur_overlap_sums[i].three_sigma)
                    throw Error("gather: tiles disagree on the set of blur widths");
                total.blur_overlap_sums[i].sum += p.blur_overlap_sums[i].sum;
            }
            total.prob_sum += p.prob_sum;
            total.overlap_sum += p.overlap_sum;
            total.sum_k += p.sum_k;
            total.sum_l += p.sum_l;
            total.sum_k2 += p.sum_k2;
            total.sum_l2 += p.sum_l2;
            total.sum_kl += p.sum_kl;
            total.max_p = std::max(total.max_p, p.max_p);
        }
    if (by_item.size() != static_cast<std::size_t>(grid_side * (grid_side + 1) / 2))
        throw Error("gather: partials lie outside the " + std::to_string(grid_side) + "x" + std::to_string(grid_side) +
                    " grid");
    if (!(total.prob_sum > 0.0)) throw Error("gather: grid captured no probability; moments are undefined");

    IndicatorReport r;
    r.normalization = normalization;
    r.total_prob = total.prob_sum;
    r.visibility_overlap = 1.0 - total.overlap_sum;
    for (const auto& b : total.blur_overlap_sums) r.visibility_blurred.push_back({b.three_sigma, 1.0 - b.sum});
    const double d = normalization == MomentNormalization::raw ? 1.0 : total.prob_sum;
    r.mean_k = total.sum_k / d;
    r.mean_l = total.sum_l / d;
    r.mean = r.mean_k + r.mean_l;
    r.variance_k = total.sum_k2 / d - r.mean_k * r.mean_k;
    r.variance_l = total.sum_l2 / d - r.mean_l * r.mean_l;
    r.variance = (total.sum_k2 + 2.0 * total.sum_kl + total.sum_l2) / d - r.mean * r.mean;
    r.max_p = total.max_p;
    return r;
}

}  // namespace mqs
