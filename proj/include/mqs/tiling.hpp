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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mqs/indicators.hpp"

namespace mqs {

/// Parameters shared by every tile of one run. The text fields keep the
/// command-line spelling, which is what appears in file names.
struct TileManifest {
    std::int64_t grid_side = 1;
    std::int64_t tile_size = 1;
    std::string m_text;
    std::string dth_text;
    std::string r_text;
};

/// One unit of work: tile (x, y) and, when x != y, its mirror (y, x).
struct WorkItem {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool diagonal() const { return x == y; }
    friend bool operator==(const WorkItem&, const WorkItem&) = default;
};

/// Work items with x >= y, ordered (0,0), (1,0), (1,1), (2,0), ...
std::vector<WorkItem> schedule_tiles(const TileManifest& manifest);

/// "M{m}_Dth{Dth}_r{R}-{x},{y}.txt"
std::string partial_file_name(const TileManifest& manifest, std::int64_t x, std::int64_t y);

void write_partial(std::ostream& out, const TilePartial& partial);
void write_partial(const std::filesystem::path& path, const TilePartial& partial);

/// Parses the key=value format written by write_partial. `source` names the
/// input in error messages.
TilePartial read_partial(std::istream& in, const std::string& source = "<stream>");
TilePartial read_partial(const std::filesystem::path& path);

/// Writes "k\tl\tp" rows for grid points with k and l divisible by plotstep.
void write_plot(const Grid& grid, const std::filesystem::path& path, std::int64_t plotstep);

/// Reads every work item's partial from `directory` and gathers them.
IndicatorReport discover_and_gather(const TileManifest& manifest, const std::filesystem::path& directory,
                                    MomentNormalization normalization = MomentNormalization::raw);

}  // namespace mqs
