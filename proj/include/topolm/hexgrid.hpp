// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/flow.hpp"
#include "topolm/io.hpp"

namespace topolm {

/// Planar hex grid over a lon/lat box under an equirectangular projection
/// (longitudes scaled by cos of the mean latitude). Each hexagon is split
/// into six triangles around its center vertex.
struct GridSpec {
    double lon_min = 0.0;
    double lat_min = 0.0;
    double lon_max = 0.0;
    double lat_max = 0.0;
    double cell_deg = 1.0;  // hexagon corner-to-corner diameter, projected degrees
    std::vector<std::vector<std::array<double, 2>>> land_polygons;  // lon/lat rings
};

struct IngestResult {
    SimplicialComplex2 complex;
    std::vector<Trajectory> trajectories;  // one per surviving track
    std::vector<std::string> kept_ids;
    std::int64_t points_total = 0;
    std::int64_t points_dropped = 0;
    int tracks_dropped = 0;
    std::vector<std::string> diagnostics;
};

/// Builds the grid complex and maps each track to a vertex path: raw points
/// snap to the nearest grid vertex, consecutive duplicates collapse, and
/// non-adjacent consecutive vertices are joined by a shortest grid path.
/// Tracks that end up shorter than one edge (or cross a disconnected region
/// when the land mask removed cells) are dropped with a diagnostic.
IngestResult ingest_points(const std::vector<Track>& tracks, const GridSpec& grid,
                           bool apply_land_mask = false);

}  // namespace topolm
