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

#include "mqs/cli.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <CLI11.hpp>

#include "mqs/errors.hpp"
#include "mqs/indicators.hpp"
#include "mqs/parallel.hpp"
#include "mqs/preselection.hpp"
#include "mqs/tiling.hpp"

namespace mqs::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double to_real(const std::string& name, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v) || v < 0.0)
        throw UsageError(name + ": expected a nonnegative number, got '" + text + "'");
    return v;
}

std::int64_t to_count(const std::string& name, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || v < 0)
        throw UsageError(name + ": expected a nonnegative integer, got '" + text + "'");
    return v;
}

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct Common {
    double eps = 1e-15;
    unsigned threads = 0;
    std::string strategy = "auto";
    bool full = false;
};

SumStrategy parse_strategy(const std::string& s) {
    if (s == "tail") return SumStrategy::tail;
    if (s == "complement") return SumStrategy::complement;
    return SumStrategy::automatic;
}

// R = 0 selects the theoretical filter: a lossless beam splitter reflects
// nothing, so the reflected-side threshold would remove every state.
Preselection make_preselection(std::int64_t dth, double r) {
    if (r == 0.0) return Theoretical{dth};
    return BeamSplitter{dth, BeamSplitterParams::from_reflectivity(r)};
}

struct NormArgs {
    std::string m, dth;
};

struct TileArgs {
    std::string m, dth, r, n2, tilesize, tilex, tiley, plotstep, plot1, plot2;
    bool blur = false;
    bool no_blur = false;
    std::vector<double> three_sigmas = kDefaultThreeSigmas;
};

struct GatherArgs {
    std::string m, dth, r, tiles;
    std::string dir = ".";
    std::string moments = "raw";
};

int run_norm(const NormArgs& a, const Common& c, std::ostream& out) {
    const GainParams gain = GainParams::from_mean(to_real("m", a.m));
    const std::int64_t dth = to_count("Dth", a.dth);
    const double n2 = norm_th(gain, dth, PrecisionConfig{c.eps}, parse_strategy(c.strategy));
    out << fmt("%.17g", n2) << '\n';
    return kSuccess;
}

int run_tile(const TileArgs& a, const Common& c, std::ostream& out) {
    const double r = to_real("R", a.r);
    if (r > 1.0) throw UsageError("R: reflectivity must not exceed 1");
    const double n2 = to_real("N2", a.n2);
    if (!(n2 > 0.0)) throw UsageError("N2: normalization must be positive");
    const std::int64_t size = to_count("tilesize", a.tilesize);
    if (size == 0) throw UsageError("tilesize: must be positive");
    const std::int64_t plotstep = to_count("plotstep", a.plotstep);
    if (plotstep == 0) throw UsageError("plotstep: must be positive");

    ModelConfig model{GainParams::from_mean(to_real("m", a.m)), make_preselection(to_count("Dth", a.dth), r),
                      PrecisionConfig{c.eps}, n2};
    const Distribution dist(model);

    const bool blur = a.blur || (!a.no_blur && dist.is_theoretical());
    const std::vector<double> widths = blur ? a.three_sigmas : std::vector<double>{};
    const TileSpec spec{to_count("tilex", a.tilex), to_count("tiley", a.tiley), size, required_margin(widths)};
    const unsigned workers = c.threads > 0 ? c.threads : default_worker_count();

    const TileResult res = compute_tile(spec, dist, widths, workers);
    write_plot(res.grid, a.plot1, plotstep);
    if (res.mirror_grid) write_plot(*res.mirror_grid, a.plot2, plotstep);
    write_partial(out, res.partial);
    return kSuccess;
}

int run_gather(const GatherArgs& a, const Common& c, std::ostream& out) {
    to_real("m", a.m);
    to_count("Dth", a.dth);
    to_real("R", a.r);
    const TileManifest manifest{to_count("tiles", a.tiles), 1, a.m, a.dth, a.r};
    if (manifest.grid_side == 0) throw UsageError("tiles: must be positive");
    const auto norm = a.moments == "captured" ? MomentNormalization::captured : MomentNormalization::raw;
    const IndicatorReport rep = discover_and_gather(manifest, a.dir, norm);

    const char* coarse = c.full ? "%.17g" : "%.3f";
    const char* fine = c.full ? "%.17g" : "%.15g";
    out << "total probability sum=" << fmt(fine, rep.total_prob) << '\n';
    out << "simple visibility computed from the overlap=" << fmt(coarse, rep.visibility_overlap) << '\n';
    for (const auto& b : rep.visibility_blurred)
        out << "visibility with Gaussian blur (3sigma=" << fmt("%g", b.three_sigma) << ")=" << fmt(coarse, b.sum)
            << '\n';
    out << "mean=" << fmt(coarse, rep.mean) << '\n';
    out << "mean k=" << fmt(coarse, rep.mean_k) << '\n';
    out << "mean l=" << fmt(coarse, rep.mean_l) << '\n';
    out << "variance=" << fmt(coarse, rep.variance) << '\n';
    out << "variance k=" << fmt(coarse, rep.variance_k) << '\n';
    out << "variance l=" << fmt(coarse, rep.variance_l) << '\n';
    out << "maximal value=" << fmt(fine, rep.max_p) << '\n';
    return kSuccess;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--precision", c.eps, "relative cutoff precision of series")
        ->check(CLI::Range(1e-300, 0.5));
    sub->add_option("--threads", c.threads, "worker count (default: MQSVIS_THREADS or OMP_NUM_THREADS)")
        ->check(CLI::Range(1u, 4096u));
    sub->add_option("--strategy", c.strategy, "summation form for preselected sums")
        ->check(CLI::IsMember({"auto", "tail", "complement"}));
    sub->add_flag("--full", c.full, "print every value with 17 significant digits");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> argv = args;
    if (argv.empty()) argv.emplace_back("mqsvis");
    const std::string prog = std::filesystem::path(argv[0]).filename().string();
    for (const char* sub : {"norm", "tile", "gather"})
        if (prog == std::string("mqsvis_") + sub) argv.insert(argv.begin() + 1, sub);

    CLI::App app("Photon-number statistics and visibility of amplified macroscopic superpositions", "mqsvis");
    app.require_subcommand(1);
    Common common;

    NormArgs na;
    auto* norm = app.add_subcommand("norm", "print the squared normalization |N|^2");
    norm->add_option("m", na.m, "mean photon parameter sinh^2 g")->required();
    norm->add_option("Dth", na.dth, "preselection threshold")->required();
    add_common(norm, common);

    TileArgs ta;
    auto* tile = app.add_subcommand("tile", "compute one tile and its mirror; partial sums go to stdout");
    for (auto [name, field] : std::initializer_list<std::pair<const char*, std::string*>>{
             {"m", &ta.m}, {"Dth", &ta.dth}, {"R", &ta.r}, {"N2", &ta.n2}, {"tilesize", &ta.tilesize},
             {"tilex", &ta.tilex}, {"tiley", &ta.tiley}, {"plotstep", &ta.plotstep}, {"plot1", &ta.plot1},
             {"plot2", &ta.plot2}})
        tile->add_option(name, *field)->required();
    auto* blur_on = tile->add_flag("--blur", ta.blur, "compute blurred overlaps (default for R = 0)");
    tile->add_flag("--no-blur", ta.no_blur, "skip blurred overlaps")->excludes(blur_on);
    tile->add_option("--three-sigma", ta.three_sigmas, "blur widths 3*sigma_bar")->check(CLI::PositiveNumber);
    add_common(tile, common);

    GatherArgs ga;
    auto* gather_cmd = app.add_subcommand("gather", "combine tile partials from the working directory");
    gather_cmd->add_option("m", ga.m)->required();
    gather_cmd->add_option("Dth", ga.dth)->required();
    gather_cmd->add_option("R", ga.r)->required();
    gather_cmd->add_option("tiles", ga.tiles, "tiles per row/column")->required();
    gather_cmd->add_option("--dir", ga.dir, "directory holding the partial files");
    gather_cmd->add_option("--moments", ga.moments, "normalize moments by 1 (raw) or by the captured mass")
        ->check(CLI::IsMember({"raw", "captured"}));
    add_common(gather_cmd, common);

    try {
        std::vector<std::string> rev(argv.rbegin(), argv.rend() - 1);
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (norm->parsed()) return run_norm(na, common, out);
        if (tile->parsed()) return run_tile(ta, common, out);
        return run_gather(ga, common, out);
    } catch (const UsageError& e) {
        err << "mqsvis: " << e.what() << '\n';
        return kUsageError;
    } catch (const MissingTile& e) {
        err << "mqsvis: " << e.what() << '\n';
        return kComputationError;
    } catch (const std::exception& e) {
        err << "mqsvis: " << e.what() << '\n';
        return kComputationError;
    }
}

}  // namespace mqs::cli
