// SPDX-License-Identifier: Apache-2.0
#include "topolm/hexgrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace topolm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3 = 1.7320508075688772;

// pointy-top hexagon corners in half-unit lattice steps (x unit sqrt(3)/2*R,
// y unit R/2), counterclockwise from 30 degrees
constexpr int kCornerDelta[6][2] = {{1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}, {1, -1}};

struct Projector {
    double lon_scale;
    std::array<double, 2> operator()(double lon, double lat) const {
        return {lon * lon_scale, lat};
    }
};

bool point_in_polygon(const std::array<double, 2>& p,
                      const std::vector<std::array<double, 2>>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if ((poly[i][1] > p[1]) != (poly[j][1] > p[1])) {
            const double x = poly[j][0] + (p[1] - poly[j][1]) / (poly[i][1] - poly[j][1]) *
                                              (poly[i][0] - poly[j][0]);
            if (p[0] < x) inside = !inside;
        }
    }
    return inside;
}

struct HexGrid {
    double radius;           // circumradius R
    double x0, y0, x1, y1;   // projected bbox
    std::map<std::pair<int, int>, int> vertex_ids;  // lattice key -> vertex id
    std::vector<std::array<double, 2>> positions;
    std::vector<std::array<int, 3>> triangles;
    std::map<std::pair<int, int>, bool> hex_included;  // axial (q, r)

    std::pair<int, int> center_key(int q, int r) const { return {2 * q + r, 3 * r}; }

    std::array<double, 2> key_position(const std::pair<int, int>& key) const {
        return {key.first * (kSqrt3 / 2.0) * radius, key.second * 0.5 * radius};
    }

    std::pair<int, int> nearest_hex(double x, double y) const {
        const double qf = (kSqrt3 / 3.0 * x - 1.0 / 3.0 * y) / radius;
        const double rf = (2.0 / 3.0 * y) / radius;
        // cube rounding
        double rx = std::round(qf), rz = std::round(rf), ry = std::round(-qf - rf);
        const double dx = std::abs(rx - qf), dz = std::abs(rz - rf),
                     dy = std::abs(ry + qf + rf);
        if (dx > dy && dx > dz)
            rx = -ry - rz;
        else if (dz > dy)
            rz = -rx - ry;
        return {static_cast<int>(rx), static_cast<int>(rz)};
    }
};

}  // namespace

IngestResult ingest_points(const std::vector<Track>& tracks, const GridSpec& grid,
                           bool apply_land_mask) {
    if (!(grid.cell_deg > 0.0)) throw ConfigError("grid cell size must be positive");
    if (!(grid.lon_max > grid.lon_min) || !(grid.lat_max > grid.lat_min))
        throw ConfigError("grid bounding box is empty");

    const double mean_lat = 0.5 * (grid.lat_min + grid.lat_max);
    const Projector proj{std::cos(mean_lat * kPi / 180.0)};

    HexGrid hg;
    hg.radius = grid.cell_deg / 2.0;
    const auto lo = proj(grid.lon_min, grid.lat_min);
    const auto hi = proj(grid.lon_max, grid.lat_max);
    hg.x0 = lo[0];
    hg.y0 = lo[1];
    hg.x1 = hi[0];
    hg.y1 = hi[1];

    std::vector<std::vector<std::array<double, 2>>> masks;
    for (const auto& poly : grid.land_polygons) {
        std::vector<std::array<double, 2>> projected;
        for (const auto& [lon, lat] : poly) projected.push_back(proj(lon, lat));
        masks.push_back(std::move(projected));
    }

    // hexagons whose center lies in the box padded by one radius
    const double R = hg.radius;
    const int r_lo = static_cast<int>(std::floor((hg.y0 - R) / (1.5 * R))) - 1;
    const int r_hi = static_cast<int>(std::ceil((hg.y1 + R) / (1.5 * R))) + 1;
    std::vector<std::pair<int, int>> hexes;
    for (int r = r_lo; r <= r_hi; ++r) {
        const double cy = 1.5 * R * r;
        if (cy < hg.y0 - R || cy > hg.y1 + R) continue;
        const int q_lo = static_cast<int>(std::floor((hg.x0 - R) / (kSqrt3 * R) - r / 2.0)) - 1;
        const int q_hi = static_cast<int>(std::ceil((hg.x1 + R) / (kSqrt3 * R) - r / 2.0)) + 1;
        for (int q = q_lo; q <= q_hi; ++q) {
            const double cx = kSqrt3 * R * (q + r / 2.0);
            if (cx < hg.x0 - R || cx > hg.x1 + R) continue;
            bool masked = false;
            if (apply_land_mask) {
                const std::array<double, 2> c{cx, cy};
                for (const auto& poly : masks)
                    if (point_in_polygon(c, poly)) {
                        masked = true;
                        break;
                    }
            }
            hg.hex_included[{q, r}] = !masked;
            if (!masked) hexes.emplace_back(q, r);
        }
    }
    if (hexes.empty()) throw DataError("grid covers no cells");

    // vertices in sorted lattice-key order (deterministic ids)
    {
        std::vector<std::pair<int, int>> keys;
        for (const auto& [q, r] : hexes) {
            const auto c = hg.center_key(q, r);
            keys.push_back(c);
            for (const auto& d : kCornerDelta)
                keys.push_back({c.first + d[0], c.second + d[1]});
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const auto& key : keys) {
            hg.vertex_ids.emplace(key, static_cast<int>(hg.positions.size()));
            hg.positions.push_back(hg.key_position(key));
        }
    }
    for (const auto& [q, r] : hexes) {
        const auto c = hg.center_key(q, r);
        const int center = hg.vertex_ids.at(c);
        for (int i = 0; i < 6; ++i) {
            const auto& d0 = kCornerDelta[i];
            const auto& d1 = kCornerDelta[(i + 1) % 6];
            const int a = hg.vertex_ids.at({c.first + d0[0], c.second + d0[1]});
            const int b = hg.vertex_ids.at({c.first + d1[0], c.second + d1[1]});
            hg.triangles.push_back({center, a, b});
        }
    }

    IngestResult out;
    out.complex = build_complex(static_cast<int>(hg.positions.size()), hg.triangles);
    out.complex.set_coords(hg.positions);

    // adjacency for shortest-path stitching
    std::vector<std::vector<std::pair<int, int>>> adj(hg.positions.size());
    for (std::int32_t e = 0; e < out.complex.n_edges(); ++e) {
        const auto& [u, v] = out.complex.edges()[e];
        adj[u].emplace_back(v, e);
        adj[v].emplace_back(u, e);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    auto edge_len = [&](int e) {
        const auto& [u, v] = out.complex.edges()[e];
        return std::hypot(hg.positions[u][0] - hg.positions[v][0],
                          hg.positions[u][1] - hg.positions[v][1]);
    };

    auto shortest_path = [&](int src, int dst) -> std::vector<int> {
        std::vector<double> dist(hg.positions.size(),
                                 std::numeric_limits<double>::infinity());
        std::vector<int> parent(hg.positions.size(), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[src] = 0.0;
        heap.push({0.0, src});
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) continue;
            if (u == dst) break;
            for (const auto& [v, e] : adj[u]) {
                const double nd = d + edge_len(e);
                if (nd < dist[v]) {
                    dist[v] = nd;
                    parent[v] = u;
                    heap.push({nd, v});
                }
            }
        }
        if (!std::isfinite(dist[dst])) return {};
        std::vector<int> path;
        for (int at = dst; at != -1; at = parent[at]) path.push_back(at);
        std::reverse(path.begin(), path.end());
        return path;
    };

    auto nearest_vertex = [&](double x, double y) -> int {
        const auto hex = hg.nearest_hex(x, y);
        auto it = hg.hex_included.find(hex);
        if (it == hg.hex_included.end() || !it->second) return -1;
        const auto c = hg.center_key(hex.first, hex.second);
        int best = hg.vertex_ids.at(c);
        double best_d2 = std::numeric_limits<double>::infinity();
        auto consider = [&](const std::pair<int, int>& key) {
            const auto p = hg.key_position(key);
            const double d2 = (p[0] - x) * (p[0] - x) + (p[1] - y) * (p[1] - y);
            const int id = hg.vertex_ids.at(key);
            if (d2 < best_d2 || (d2 == best_d2 && id < best)) {
                best_d2 = d2;
                best = id;
            }
        };
        consider(c);
        for (const auto& d : kCornerDelta) consider({c.first + d[0], c.second + d[1]});
        return best;
    };

    for (const Track& track : tracks) {
        out.points_total += static_cast<std::int64_t>(track.lonlat.size());
        std::vector<int> vertices;
        for (const auto& [lon, lat] : track.lonlat) {
            if (lon < grid.lon_min || lon > grid.lon_max || lat < grid.lat_min ||
                lat > grid.lat_max) {
                ++out.points_dropped;
                continue;
            }
            const auto p = proj(lon, lat);
            const int v = nearest_vertex(p[0], p[1]);
            if (v < 0) {
                ++out.points_dropped;
                continue;
            }
            if (vertices.empty() || vertices.back() != v) vertices.push_back(v);
        }
        if (vertices.size() < 2) {
            ++out.tracks_dropped;
            out.diagnostics.push_back("track " + track.id +
                                      ": fewer than two grid vertices after mapping");
            continue;
        }
        std::vector<int> stitched{vertices[0]};
        bool ok = true;
        for (std::size_t i = 1; i < vertices.size() && ok; ++i) {
            if (out.complex.edge_id(stitched.back(), vertices[i]) >= 0) {
                stitched.push_back(vertices[i]);
                continue;
            }
            const std::vector<int> path = shortest_path(stitched.back(), vertices[i]);
            if (path.empty()) {
                ok = false;
                break;
            }
            stitched.insert(stitched.end(), path.begin() + 1, path.end());
        }
        if (!ok) {
            ++out.tracks_dropped;
            out.diagnostics.push_back("track " + track.id +
                                      ": consecutive cells unreachable on the grid");
            continue;
        }
        out.trajectories.push_back({std::move(stitched), std::nullopt});
        out.kept_ids.push_back(track.id);
    }
    return out;
}

}  // namespace topolm
