// SPDX-License-Identifier: Apache-2.0
#include "topolm/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>

#include "topolm/rng.hpp"

namespace topolm {

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

int orient2d_sign(double ax, double ay, double bx, double by, double cx, double cy) {
    const double detleft = (ax - cx) * (by - cy);
    const double detright = (ay - cy) * (bx - cx);
    const double det = detleft - detright;
    const double detsum = std::abs(detleft) + std::abs(detright);
    if (std::abs(det) > 3.4e-16 * detsum) return sign_of(det);

    const long double l = (static_cast<long double>(ax) - cx) * (static_cast<long double>(by) - cy);
    const long double r = (static_cast<long double>(ay) - cy) * (static_cast<long double>(bx) - cx);
    const long double d = l - r;
    if (std::abs(static_cast<double>(d)) > 1.1e-19 * static_cast<double>(std::abs(l) + std::abs(r)))
        return d > 0 ? 1 : -1;
    return 0;
}

int incircle_sign(double ax, double ay, double bx, double by, double cx, double cy,
                  double dx, double dy) {
    const double adx = ax - dx, ady = ay - dy;
    const double bdx = bx - dx, bdy = by - dy;
    const double cdx = cx - dx, cdy = cy - dy;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > 1.2e-15 * permanent) return sign_of(det);

    // long-double retry
    const long double ladx = static_cast<long double>(ax) - dx, lady = static_cast<long double>(ay) - dy;
    const long double lbdx = static_cast<long double>(bx) - dx, lbdy = static_cast<long double>(by) - dy;
    const long double lcdx = static_cast<long double>(cx) - dx, lcdy = static_cast<long double>(cy) - dy;
    const long double la = ladx * ladx + lady * lady;
    const long double lb = lbdx * lbdx + lbdy * lbdy;
    const long double lc = lcdx * lcdx + lcdy * lcdy;
    const long double ldet = la * (lbdx * lcdy - lcdx * lbdy) +
                             lb * (lcdx * lady - ladx * lcdy) +
                             lc * (ladx * lbdy - lbdx * lady);
    const long double lperm = (std::abs(lbdx * lcdy) + std::abs(lcdx * lbdy)) * la +
                              (std::abs(lcdx * lady) + std::abs(ladx * lcdy)) * lb +
                              (std::abs(ladx * lbdy) + std::abs(lbdx * lady)) * lc;
    if (std::abs(static_cast<double>(ldet)) > 1.1e-18 * static_cast<double>(lperm))
        return ldet > 0 ? 1 : -1;
    return 0;
}

namespace {

// The three bounding vertices live symbolically at infinity in fixed
// directions, so no coordinate magnitudes ever enter the predicates.
constexpr double kSuperDir[3][2] = {{0.0, 1.0},
                                    {-0.8660254037844386, -0.5},
                                    {0.8660254037844386, -0.5}};

struct BWTriangle {
    std::array<int, 3> v;    // counterclockwise
    std::array<int, 3> nbr;  // nbr[i] shares the edge opposite v[i]; -1 = none
    bool alive = true;
};

class BowyerWatson {
  public:
    explicit BowyerWatson(const std::vector<std::array<double, 2>>& pts)
        : pts_(pts), n_real_(static_cast<int>(pts.size())) {
        tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
        last_ = 0;
    }

    void insert_all() {
        for (int p = 0; p < n_real_; ++p) insert(p);
    }

    std::vector<std::array<int, 3>> real_triangles() const {
        std::vector<std::array<int, 3>> out;
        for (const BWTriangle& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= n_real_ || t.v[1] >= n_real_ || t.v[2] >= n_real_) continue;
            std::array<int, 3> s = t.v;
            std::sort(s.begin(), s.end());
            out.push_back(s);
        }
        return out;
    }

  private:
    bool is_super(int v) const { return v >= n_real_; }
    const double* dir(int v) const { return kSuperDir[v - n_real_]; }

    // orientation of (a, b, c) with symbolic handling of far vertices
    int orient(int a, int b, int c) const {
        // rotate supers to the tail (cyclic rotations preserve orientation)
        for (int rot = 0; rot < 3; ++rot) {
            if (!is_super(a) && (is_super(c) || !is_super(b))) break;
            const int t = a;
            a = b;
            b = c;
            c = t;
        }
        const int n_super = is_super(a) + is_super(b) + is_super(c);
        switch (n_super) {
            case 0:
                return orient2d_sign(pts_[a][0], pts_[a][1], pts_[b][0], pts_[b][1],
                                     pts_[c][0], pts_[c][1]);
            case 1: {
                // (a, b) real, c at infinity: sign of cross(b - a, dir_c)
                const double* d = dir(c);
                const double det = (pts_[b][0] - pts_[a][0]) * d[1] -
                                   (pts_[b][1] - pts_[a][1]) * d[0];
                return sign_of(det);
            }
            case 2: {
                // a real, (b, c) at infinity: sign of cross(dir_b, dir_c)
                const double* db = dir(b);
                const double* dc = dir(c);
                return sign_of(db[0] * dc[1] - db[1] * dc[0]);
            }
            default:
                return 1;  // the initial bounding triangle is counterclockwise
        }
    }

    // p (real) strictly inside the circumcircle of counterclockwise tri
    bool in_circumcircle(const BWTriangle& t, int p) const {
        std::array<int, 3> v = t.v;
        for (int rot = 0; rot < 3; ++rot) {
            if (!is_super(v[0]) && (is_super(v[2]) || !is_super(v[1]))) break;
            std::rotate(v.begin(), v.begin() + 1, v.end());
        }
        const int n_super = is_super(v[0]) + is_super(v[1]) + is_super(v[2]);
        switch (n_super) {
            case 0:
                return incircle_sign(pts_[v[0]][0], pts_[v[0]][1], pts_[v[1]][0],
                                     pts_[v[1]][1], pts_[v[2]][0], pts_[v[2]][1],
                                     pts_[p][0], pts_[p][1]) > 0;
            case 1:
                // limit circle is the half-plane left of the real edge
                return orient2d_sign(pts_[v[0]][0], pts_[v[0]][1], pts_[v[1]][0],
                                     pts_[v[1]][1], pts_[p][0], pts_[p][1]) > 0;
            case 2: {
                // limit half-plane through the single real vertex a:
                // inside iff cross(a - p, dir_i - dir_j) > 0
                const double* di = dir(v[1]);
                const double* dj = dir(v[2]);
                const double ux = di[0] - dj[0], uy = di[1] - dj[1];
                const double det = (pts_[v[0]][0] - pts_[p][0]) * uy -
                                   (pts_[v[0]][1] - pts_[p][1]) * ux;
                return det > 0.0;
            }
            default:
                return true;
        }
    }

    bool contains(int tri, int p) const {
        const BWTriangle& t = tris_[tri];
        return orient(t.v[0], t.v[1], p) >= 0 && orient(t.v[1], t.v[2], p) >= 0 &&
               orient(t.v[2], t.v[0], p) >= 0;
    }

    int locate(int p) {
        int at = last_;
        const int cap = static_cast<int>(tris_.size()) * 4 + 64;
        for (int steps = 0; steps < cap; ++steps) {
            const BWTriangle& t = tris_[at];
            int next = -1;
            for (int i = 0; i < 3; ++i) {
                const int a = t.v[(i + 1) % 3];
                const int b = t.v[(i + 2) % 3];
                if (orient(a, b, p) < 0) {
                    next = t.nbr[i];
                    break;
                }
            }
            if (next < 0) return at;
            at = next;
        }
        // walk cycled on a near-degenerate configuration: scan
        for (int i = 0; i < static_cast<int>(tris_.size()); ++i)
            if (tris_[i].alive && contains(i, p)) return i;
        throw std::runtime_error("delaunay: point location failed");
    }

    void insert(int p) {
        const int start = locate(p);

        // grow the cavity of circumcircle violations
        std::vector<int> bad{start};
        std::vector<char> in_bad(tris_.size(), 0);
        in_bad[start] = 1;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            const int at = queue.front();
            queue.pop_front();
            for (int nb : tris_[at].nbr) {
                if (nb < 0 || in_bad[nb]) continue;
                if (in_circumcircle(tris_[nb], p)) {
                    in_bad[nb] = 1;
                    bad.push_back(nb);
                    queue.push_back(nb);
                }
            }
        }

        // boundary segments (a -> b, counterclockwise in their bad triangle)
        struct Segment {
            int a, b, outside;
        };
        std::vector<Segment> boundary;
        for (int tb : bad) {
            const BWTriangle& t = tris_[tb];
            for (int i = 0; i < 3; ++i) {
                const int nb = t.nbr[i];
                if (nb >= 0 && in_bad[nb]) continue;
                boundary.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], nb});
            }
        }
        for (int tb : bad) tris_[tb].alive = false;

        // fan the cavity from p; stitch neighbors via the boundary cycle
        std::vector<int> new_ids(boundary.size());
        std::vector<std::pair<int, int>> start_of;  // (vertex a, new tri) pairs
        start_of.reserve(boundary.size());
        for (std::size_t s = 0; s < boundary.size(); ++s) {
            const Segment& seg = boundary[s];
            const int id = static_cast<int>(tris_.size());
            tris_.push_back({{seg.a, seg.b, p}, {-1, -1, seg.outside}, true});
            new_ids[s] = id;
            start_of.emplace_back(seg.a, id);
            if (seg.outside >= 0) {
                BWTriangle& o = tris_[seg.outside];
                for (int i = 0; i < 3; ++i)
                    if (o.v[(i + 1) % 3] == seg.b && o.v[(i + 2) % 3] == seg.a) o.nbr[i] = id;
            }
        }
        std::sort(start_of.begin(), start_of.end());
        auto tri_starting_at = [&](int vertex) {
            auto it = std::lower_bound(start_of.begin(), start_of.end(),
                                       std::make_pair(vertex, -1));
            return it->second;
        };
        for (std::size_t s = 0; s < boundary.size(); ++s) {
            const Segment& seg = boundary[s];
            BWTriangle& t = tris_[new_ids[s]];
            t.nbr[0] = tri_starting_at(seg.b);  // across (b, p)
            // across (p, a): the segment ending at a, i.e. starting at a's predecessor
            for (std::size_t s2 = 0; s2 < boundary.size(); ++s2)
                if (boundary[s2].b == seg.a) {
                    t.nbr[1] = new_ids[s2];
                    break;
                }
        }
        last_ = new_ids.empty() ? last_ : new_ids[0];
        if (boundary.empty()) throw std::runtime_error("delaunay: empty cavity");
    }

    const std::vector<std::array<double, 2>>& pts_;
    int n_real_;
    std::vector<BWTriangle> tris_;
    int last_;
};

}  // namespace

SimplicialComplex2 delaunay_complex(int n_points, std::uint64_t seed) {
    if (n_points < 3) throw std::invalid_argument("delaunay_complex: need n_points >= 3");

    Rng rng(seed);
    std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(n_points));
    for (auto& p : pts) {
        p[0] = rng.next_unit();
        p[1] = rng.next_unit();
    }

    BowyerWatson bw(pts);
    bw.insert_all();
    const std::vector<std::array<int, 3>> tris = bw.real_triangles();
    if (tris.empty())
        throw std::invalid_argument("delaunay_complex: degenerate (collinear) point set");

    SimplicialComplex2 sc = build_complex(n_points, tris);
    sc.set_coords(std::move(pts));
    return sc;
}

namespace {

struct VertexGraph {
    // per-vertex (neighbor, edge id) lists in neighbor order
    std::vector<std::vector<std::pair<int, int>>> adj;

    explicit VertexGraph(const SimplicialComplex2& sc) : adj(sc.n_vertices()) {
        for (std::int32_t e = 0; e < sc.n_edges(); ++e) {
            const auto& [u, v] = sc.edges()[e];
            adj[u].emplace_back(v, e);
            adj[v].emplace_back(u, e);
        }
        for (auto& list : adj) std::sort(list.begin(), list.end());
    }
};

std::vector<int> dijkstra_path(const VertexGraph& g, const std::vector<double>& weights,
                               int src, int dst) {
    const std::size_t n = g.adj.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == dst) break;
        for (const auto& [v, e] : g.adj[u]) {
            const double nd = d + weights[e];
            if (nd < dist[v]) {
                dist[v] = nd;
                parent[v] = u;
                heap.push({nd, v});
            }
        }
    }
    if (!std::isfinite(dist[dst]))
        throw std::runtime_error("trajectory_class: start and end are disconnected");
    std::vector<int> path;
    for (int at = dst; at != -1; at = parent[at]) path.push_back(at);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::vector<Trajectory> trajectory_class(const SimplicialComplex2& sc,
                                         std::uint64_t class_seed, int n_paths,
                                         double alpha, double boundary_margin) {
    if (n_paths < 1) throw std::invalid_argument("trajectory_class: n_paths >= 1");
    if (alpha < 1.0) throw std::invalid_argument("trajectory_class: alpha >= 1");
    if (sc.coords().empty())
        throw std::invalid_argument("trajectory_class: complex has no coordinates");

    Rng rng(class_seed);
    const auto& pts = sc.coords();

    // start strip on one side of a random axis, end strip on the opposite side
    const int axis = static_cast<int>(rng.bounded(2));
    std::vector<int> low, high;
    double margin = boundary_margin;
    while (low.empty() || high.empty()) {
        low.clear();
        high.clear();
        for (std::int32_t v = 0; v < sc.n_vertices(); ++v) {
            if (pts[v][axis] < margin) low.push_back(v);
            if (pts[v][axis] > 1.0 - margin) high.push_back(v);
        }
        if (!low.empty() && !high.empty()) break;
        margin *= 1.5;
        if (margin > 0.45)
            throw std::runtime_error("trajectory_class: empty boundary strip");
    }
    int src = low[rng.index(low.size())];
    int dst = high[rng.index(high.size())];
    if (rng.bounded(2) == 1) std::swap(src, dst);

    VertexGraph graph(sc);
    std::vector<double> weights(static_cast<std::size_t>(sc.n_edges()));
    for (std::int32_t e = 0; e < sc.n_edges(); ++e) {
        const auto& [u, v] = sc.edges()[e];
        weights[e] = std::hypot(pts[u][0] - pts[v][0], pts[u][1] - pts[v][1]);
    }

    std::vector<Trajectory> out;
    out.reserve(static_cast<std::size_t>(n_paths));
    for (int i = 0; i < n_paths; ++i) {
        std::vector<int> path = dijkstra_path(graph, weights, src, dst);
        for (std::size_t j = 0; j + 1 < path.size(); ++j)
            weights[sc.edge_id(path[j], path[j + 1])] *= alpha;
        out.push_back({std::move(path), std::nullopt});
    }
    return out;
}

Dataset make_dataset(const SynthConfig& cfg) {
    if (cfg.n_points < 10) throw std::invalid_argument("make_dataset: n_points >= 10");
    if (cfg.n_classes < 1 || cfg.n_train_per_class < 1 || cfg.n_test_per_class < 1)
        throw std::invalid_argument("make_dataset: counts must be >= 1");
    if (!(cfg.weight_inflation > 1.0))
        throw std::invalid_argument("make_dataset: weight_inflation must be > 1");
    if (!(cfg.boundary_margin > 0.0) || !(cfg.boundary_margin < 0.5))
        throw std::invalid_argument("make_dataset: boundary_margin in (0, 0.5)");

    Dataset ds;
    ds.complex = delaunay_complex(cfg.n_points, splitmix64(cfg.seed ^ 0xd31aUL));

    const int per_class = cfg.n_train_per_class + cfg.n_test_per_class;
    for (int c = 0; c < cfg.n_classes; ++c) {
        std::vector<Trajectory> paths = trajectory_class(
            ds.complex, splitmix64(cfg.seed ^ (0xc1a55ULL + static_cast<std::uint64_t>(c))),
            per_class, cfg.weight_inflation, cfg.boundary_margin);
        for (Trajectory& t : paths) t.label = c;

        std::vector<int> order(paths.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        Rng split_rng(splitmix64(cfg.seed ^ (0x5b117ULL + static_cast<std::uint64_t>(c))));
        split_rng.shuffle(order);
        for (int i = 0; i < per_class; ++i) {
            Trajectory& t = paths[order[i]];
            (i < cfg.n_train_per_class ? ds.train : ds.test).push_back(std::move(t));
        }
    }
    return ds;
}

}  // namespace topolm
