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
#include <numbers>
#include <random>
#include <vector>

#include "mqs/errors.hpp"
#include "mqs/indicators.hpp"

using namespace mqs;

namespace {

ModelConfig model_for(double m, Preselection presel) {
    const GainParams g = GainParams::from_mean(m);
    return ModelConfig{g, presel, {}, norm_sq(g, presel)};
}

double window_mass(double sigma_bar) {
    const auto w = static_cast<int>(std::floor(3 * sigma_bar + 1e-9));
    double s = 0.0;
    for (int p = -w; p <= w; ++p)
        for (int q = -w; q <= w; ++q) s += std::exp(-(p * p + q * q) / (2 * sigma_bar * sigma_bar));
    return s / (2 * std::numbers::pi * sigma_bar * sigma_bar);
}

std::vector<PlacedPartial> run_grid(const Distribution& dist, std::int64_t side, std::int64_t size,
                                    std::span<const double> widths, unsigned workers = 1) {
    std::vector<PlacedPartial> out;
    for (std::int64_t x = 0; x < side; ++x)
        for (std::int64_t y = 0; y <= x; ++y) {
            const TileSpec spec{x, y, size, required_margin(widths)};
            out.push_back({x, y, compute_tile(spec, dist, widths, workers).partial});
        }
    return out;
}

void check_close(double a, double b, double tol) {
    CHECK(std::abs(a - b) <= tol * std::max(1.0, std::abs(b)));
}

void check_reports_close(const IndicatorReport& a, const IndicatorReport& b, double tol) {
    check_close(a.total_prob, b.total_prob, tol);
    check_close(a.visibility_overlap, b.visibility_overlap, tol);
    REQUIRE(a.visibility_blurred.size() == b.visibility_blurred.size());
    for (std::size_t i = 0; i < a.visibility_blurred.size(); ++i)
        check_close(a.visibility_blurred[i].sum, b.visibility_blurred[i].sum, tol);
    check_close(a.mean, b.mean, tol);
    check_close(a.mean_k, b.mean_k, tol);
    check_close(a.mean_l, b.mean_l, tol);
    check_close(a.variance, b.variance, tol);
    check_close(a.variance_k, b.variance_k, tol);
    check_close(a.variance_l, b.variance_l, tol);
    CHECK(a.max_p == b.max_p);
}

}  // namespace

TEST_CASE("tile geometry") {
    const TileSpec t{2, 1, 10, 3};
    CHECK(t.interior() == Region{20, 10, 10, 10});
    CHECK(t.padded() == Region{17, 7, 16, 16});
    CHECK(TileSpec{0, 0, 10, 3}.padded() == Region{0, 0, 13, 13});
    CHECK(t.mirror().x == 1);
    CHECK(!t.diagonal());
    CHECK_THROWS_AS((TileSpec{0, 0, 0, 0}.padded()), DomainError);
    CHECK(required_margin(kDefaultThreeSigmas) == 150);
    const std::vector<double> small = {1.0, 1.5};
    CHECK(required_margin(small) == 2);
}

TEST_CASE("mirror tiles are transposes") {
    for (const Preselection& presel : std::vector<Preselection>{Theoretical{2}, BeamSplitter{2, BeamSplitterParams::from_reflectivity(0.1)}}) {
        const Distribution dist(model_for(5.0, presel));
        const std::vector<double> none;
        const TileResult a = compute_tile({1, 0, 8, 0}, dist, none);
        const TileResult b = compute_tile({0, 1, 8, 0}, dist, none);
        REQUIRE(a.mirror_grid);
        REQUIRE(b.mirror_grid);
        for (int k = 8; k < 16; ++k)
            for (int l = 0; l < 8; ++l) {
                CHECK(a.grid.at(k, l) == b.mirror_grid->at(k, l));
                CHECK(a.mirror_grid->at(l, k) == b.grid.at(l, k));
            }
        CHECK(a.partial.prob_sum == doctest::Approx(b.partial.prob_sum).epsilon(1e-15));
        CHECK(a.partial.overlap_sum == doctest::Approx(b.partial.overlap_sum).epsilon(1e-15));
    }
}

TEST_CASE("theoretical supports are parity disjoint") {
    const Distribution dist(model_for(5.0, Theoretical{2}));
    const std::vector<double> none;
    for (auto [x, y] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 1}, {3, 3}})
        CHECK(compute_tile({x, y, 7, 0}, dist, none).partial.overlap_sum == 0.0);
}

TEST_CASE("beam-splitter supports overlap") {
    // reflected photons remove the parity structure
    const Distribution dist(model_for(5.0, BeamSplitter{2, BeamSplitterParams::from_reflectivity(0.1)}));
    const std::vector<double> none;
    const TileResult t = compute_tile({1, 1, 8, 0}, dist, none);
    CHECK(t.partial.overlap_sum > 0.0);
    CHECK(t.partial.overlap_sum <= t.partial.prob_sum);
}

TEST_CASE("mirror-pair batching evaluates each point once") {
    const Distribution dist(model_for(2.0, Theoretical{2}));
    const std::vector<double> widths = {1.5};
    const TileSpec off{3, 1, 10, 2};
    CHECK(compute_tile(off, dist, widths).evaluations == 2 * off.padded().cells());
    const TileSpec diag{2, 2, 10, 2};
    CHECK(compute_tile(diag, dist, widths).evaluations == diag.padded().cells());
}

TEST_CASE("margin must cover the widest blur") {
    const Distribution dist(model_for(2.0, Theoretical{2}));
    const std::vector<double> widths = {15.0};
    CHECK_THROWS_AS(compute_tile({1, 1, 10, 5}, dist, widths), DomainError);
    Grid g(Region{10, 10, 20, 20});
    CHECK_THROWS_AS(blur_weierstrass(g, 5.0, Region{15, 15, 10, 10}), DomainError);
    CHECK_NOTHROW(blur_weierstrass(g, 5.0 / 3, Region{15, 15, 10, 10}));
}

TEST_CASE("blur of simple fields") {
    Grid zero(Region{0, 0, 40, 40});
    const Grid bz = blur_weierstrass(zero, 2.0, Region{10, 10, 20, 20});
    CHECK(std::all_of(bz.values.begin(), bz.values.end(), [](double v) { return v == 0.0; }));

    Grid unit(Region{0, 0, 401, 401});
    unit.at(200, 200) = 1.0;
    const Grid bu = blur_weierstrass(unit, 50.0, Region{150, 150, 101, 101});
    CHECK(bu.at(200, 200) == doctest::Approx(1.0 / (2 * std::numbers::pi * 2500)).epsilon(1e-14));
    CHECK(bu.at(200, 200) == doctest::Approx(6.3662e-5).epsilon(1e-4));
    CHECK(bu.at(210, 200) == doctest::Approx(std::exp(-100.0 / 5000) / (2 * std::numbers::pi * 2500)).epsilon(1e-14));

    Grid flat(Region{0, 0, 60, 60});
    std::fill(flat.values.begin(), flat.values.end(), 0.25);
    for (double sb : {1.0 / 3, 0.5, 5.0}) {
        const Grid bf = blur_weierstrass(flat, sb, Region{20, 20, 20, 20});
        CHECK(bf.at(30, 30) == doctest::Approx(0.25 * window_mass(sb)).epsilon(1e-13));
    }
}

TEST_CASE("blur outside the nonnegative quadrant counts as zero") {
    Grid g(Region{0, 0, 10, 10});
    std::fill(g.values.begin(), g.values.end(), 1.0);
    const Grid b = blur_weierstrass(g, 1.0, Region{0, 0, 5, 5});
    CHECK(b.at(0, 0) < b.at(4, 4));
}

TEST_CASE("blur conserves mass up to the window mass") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Grid g(Region{0, 0, 80, 80});
    double mass = 0.0;
    for (int k = 30; k < 50; ++k)
        for (int l = 30; l < 50; ++l) mass += (g.at(k, l) = u(rng));
    for (double sb : {0.5, 2.0, 5.0}) {
        const Grid b = blur_weierstrass(g, sb, Region{15, 15, 50, 50});
        double blurred = 0.0;
        for (double v : b.values) blurred += v;
        CHECK(blurred == doctest::Approx(mass * window_mass(sb)).epsilon(1e-10));
    }
}

TEST_CASE("cutoff search") {
    const Distribution bs(model_for(5.0, BeamSplitter{2, BeamSplitterParams::from_reflectivity(0.1)}));
    const std::int64_t K6 = find_cutoff_KL(bs, 1e-6);
    const std::int64_t K12 = find_cutoff_KL(bs, 1e-12);
    CHECK(K6 >= 150);
    CHECK(bs.p(K6, 0) < 1e-6);
    CHECK(bs.p(K12, 0) < 1e-12);
    CHECK(K12 >= K6);

    const Distribution th(model_for(5.0, Theoretical{2}));
    const std::int64_t Kt = find_cutoff_KL(th, 1e-12);
    CHECK(Kt >= 100);
    CHECK(th.p(Kt, 0) < 1e-12);
    CHECK(Kt % 2 == 1);
    CHECK_THROWS_AS(find_cutoff_KL(th, 0.0), DomainError);
}

TEST_CASE("single tile equals direct evaluation") {
    const Distribution dist(model_for(2.0, Theoretical{3}));
    const std::vector<double> widths = {1.5, 15.0};
    const auto parts = run_grid(dist, 1, 60, widths);
    const IndicatorReport rep = gather(parts, 1);

    const std::int64_t K = 60;
    const auto grid = dist.evaluate_block(0, K, 0, K);
    double total = 0, sk = 0, sl = 0, sk2 = 0, sl2 = 0, skl = 0, mx = 0;
    for (std::int64_t k = 0; k < K; ++k)
        for (std::int64_t l = 0; l < K; ++l) {
            const double v = grid[static_cast<std::size_t>(k * K + l)];
            total += v;
            sk += k * v;
            sl += l * v;
            sk2 += static_cast<double>(k * k) * v;
            sl2 += static_cast<double>(l * l) * v;
            skl += static_cast<double>(k * l) * v;
            mx = std::max(mx, v);
        }
    check_close(rep.total_prob, total, 1e-12);
    check_close(rep.mean_k, sk, 1e-12);
    check_close(rep.mean_l, sl, 1e-12);
    check_close(rep.mean, sk + sl, 1e-12);
    check_close(rep.variance_k, sk2 - sk * sk, 1e-10);
    check_close(rep.variance_l, sl2 - sl * sl, 1e-10);
    check_close(rep.variance, sk2 + 2 * skl + sl2 - (sk + sl) * (sk + sl), 1e-10);
    CHECK(rep.max_p == mx);
    CHECK(rep.visibility_overlap == 1.0);
    for (const auto& b : rep.visibility_blurred) {
        CHECK(b.sum >= -1e-9);
        CHECK(b.sum <= 1.0 + 1e-9);
    }

    const IndicatorReport cap = gather(parts, 1, MomentNormalization::captured);
    check_close(cap.mean_k, sk / total, 1e-12);
}

TEST_CASE("tiling invariance") {
    const Distribution dist(model_for(5.0, Theoretical{2}));
    const std::vector<double> widths = {1.0, 1.5, 15.0};
    const IndicatorReport ref = gather(run_grid(dist, 1, 50, widths), 1);
    for (std::int64_t size : {5, 10, 25}) {
        const auto parts = run_grid(dist, 50 / size, size, widths, 2);
        check_reports_close(gather(parts, 50 / size), ref, 1e-12);
    }
}

TEST_CASE("gather is independent of partial order and orientation") {
    const Distribution dist(model_for(3.0, BeamSplitter{3, BeamSplitterParams::from_reflectivity(0.2)}));
    const std::vector<double> none;
    auto parts = run_grid(dist, 3, 7, none);
    const IndicatorReport a = gather(parts, 3);
    std::reverse(parts.begin(), parts.end());
    for (auto& p : parts) std::swap(p.x, p.y);
    const IndicatorReport b = gather(parts, 3);
    check_reports_close(a, b, 0.0);
    for (const auto& p : parts) {
        CHECK(p.partial.prob_sum >= 0.0);
        // 2 sqrt(ab) <= a + b summed over the tile and its mirror
        CHECK(p.partial.overlap_sum <= p.partial.prob_sum * (1 + 1e-14));
    }
}

TEST_CASE("gather errors") {
    const Distribution dist(model_for(3.0, Theoretical{2}));
    const std::vector<double> none;
    auto parts = run_grid(dist, 2, 5, none);
    parts.erase(parts.begin() + 1);  // drops (1,0)
    try {
        gather(parts, 2);
        FAIL("expected a missing tile");
    } catch (const MissingTile& e) {
        CHECK(e.x() == 1);
        CHECK(e.y() == 0);
    }
    std::vector<PlacedPartial> zeros = {{0, 0, TilePartial{}}};
    CHECK_THROWS_AS(gather(zeros, 1), Error);

    auto dup = run_grid(dist, 1, 5, none);
    dup.push_back(dup.front());
    CHECK_THROWS_AS(gather(dup, 1), Error);

    auto mixed = run_grid(dist, 2, 5, none);
    mixed[0].partial.blur_overlap_sums.push_back({1.5, 0.0});
    CHECK_THROWS_AS(gather(mixed, 2), Error);
}

TEST_CASE("tile results do not depend on the worker count") {
    const Distribution dist(model_for(5.0, BeamSplitter{4, BeamSplitterParams::from_reflectivity(0.1)}));
    const std::vector<double> widths = {1.5};
    const TileSpec spec{2, 1, 12, 2};
    const TileResult one = compute_tile(spec, dist, widths, 1);
    for (unsigned w : {2u, 8u}) CHECK(compute_tile(spec, dist, widths, w).partial == one.partial);
}
