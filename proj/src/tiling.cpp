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

#include "mqs/tiling.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "mqs/errors.hpp"

namespace mqs {

namespace {

constexpr const char* kBlurPrefix = "blur_overlap_3sigma_";

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_width(double three_sigma) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", three_sigma);
    return buf;
}

double parse_double(const std::string& text, const std::string& source, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw IoError(source + ":" + std::to_string(line) + ": bad number '" + text + "'");
    return v;
}

}  // namespace

std::vector<WorkItem> schedule_tiles(const TileManifest& manifest) {
    if (manifest.grid_side <= 0) throw DomainError("schedule_tiles: grid side must be positive");
    std::vector<WorkItem> items;
    items.reserve(static_cast<std::size_t>(manifest.grid_side * (manifest.grid_side + 1) / 2));
    for (std::int64_t x = 0; x < manifest.grid_side; ++x)
        for (std::int64_t y = 0; y <= x; ++y) items.push_back({x, y});
    return items;
}

std::string partial_file_name(const TileManifest& manifest, std::int64_t x, std::int64_t y) {
    return "M" + manifest.m_text + "_Dth" + manifest.dth_text + "_r" + manifest.r_text + "-" + std::to_string(x) +
           "," + std::to_string(y) + ".txt";
}

void write_partial(std::ostream& out, const TilePartial& p) {
    out << "prob_sum=" << format_value(p.prob_sum) << '\n';
    out << "overlap_sum=" << format_value(p.overlap_sum) << '\n';
    for (const auto& b : p.blur_overlap_sums)
        out << kBlurPrefix << format_width(b.three_sigma) << '=' << format_value(b.sum) << '\n';
    out << "sum_k=" << format_value(p.sum_k) << '\n';
    out << "sum_l=" << format_value(p.sum_l) << '\n';
    out << "sum_k2=" << format_value(p.sum_k2) << '\n';
    out << "sum_l2=" << format_value(p.sum_l2) << '\n';
    out << "sum_kl=" << format_value(p.sum_kl) << '\n';
    out << "max_p=" << format_value(p.max_p) << '\n';
}

void write_partial(const std::filesystem::path& path, const TilePartial& partial) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_partial(out, partial);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

TilePartial read_partial(std::istream& in, const std::string& source) {
    TilePartial p;
    std::map<std::string, double*> fields = {
        {"prob_sum", &p.prob_sum}, {"overlap_sum", &p.overlap_sum}, {"sum_k", &p.sum_k},
        {"sum_l", &p.sum_l},       {"sum_k2", &p.sum_k2},           {"sum_l2", &p.sum_l2},
        {"sum_kl", &p.sum_kl},     {"max_p", &p.max_p},
    };
    std::map<std::string, bool> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(source + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const double value = parse_double(line.substr(eq + 1), source, line_no);
        if (seen[key]) throw IoError(source + ":" + std::to_string(line_no) + ": duplicate key " + key);
        seen[key] = true;
        if (const auto it = fields.find(key); it != fields.end()) {
            *it->second = value;
        } else if (key.rfind(kBlurPrefix, 0) == 0) {
            const std::string width = key.substr(std::string(kBlurPrefix).size());
            p.blur_overlap_sums.push_back({parse_double(width, source, line_no), value});
        } else {
            throw IoError(source + ":" + std::to_string(line_no) + ": unknown key " + key);
        }
    }
    for (const auto& [key, ptr] : fields)
        if (!seen[key]) throw IoError(source + ": missing key " + key);
    return p;
}

TilePartial read_partial(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_partial(in, path.string());
}

void write_plot(const Grid& grid, const std::filesystem::path& path, std::int64_t plotstep) {
    if (plotstep < 1) throw DomainError("plotstep must be at least 1");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const Region& r = grid.region;
    for (std::int64_t k = r.k0; k < r.k_end(); ++k) {
        if (k % plotstep != 0) continue;
        for (std::int64_t l = r.l0; l < r.l_end(); ++l)
            if (l % plotstep == 0) out << k << '\t' << l << '\t' << format_value(grid.at(k, l)) << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

IndicatorReport discover_and_gather(const TileManifest& manifest, const std::filesystem::path& directory,
                                    MomentNormalization normalization) {
    std::vector<PlacedPartial> partials;
    for (const WorkItem& item : schedule_tiles(manifest)) {
        std::filesystem::path path = directory / partial_file_name(manifest, item.x, item.y);
        if (!item.diagonal() && !std::filesystem::exists(path))
            path = directory / partial_file_name(manifest, item.y, item.x);
        if (!std::filesystem::exists(path))
            throw MissingTile(item.x, item.y,
                              "missing tile (" + std::to_string(item.x) + "," + std::to_string(item.y) + "): " +
                                  (directory / partial_file_name(manifest, item.x, item.y)).string());
        partials.push_back({item.x, item.y, read_partial(path)});
    }
    return gather(partials, manifest.grid_side, normalization);
}

}  // namespace mqs
