// SPDX-License-Identifier: Apache-2.0
#include "topolm/complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace topolm {

void SimplicialComplex2::set_coords(std::vector<std::array<double, 2>> coords) {
    if (!coords.empty() && coords.size() != static_cast<std::size_t>(n_vertices_))
        throw std::invalid_argument("coords size must equal n_vertices");
    coords_ = std::move(coords);
}

int SimplicialComplex2::edge_id(int u, int v) const {
    if (u > v) std::swap(u, v);
    const std::array<int, 2> key{u, v};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return -1;
    return static_cast<int>(it - edges_.begin());
}

int SimplicialComplex2::triangle_id(int u, int v, int w) const {
    std::array<int, 3> key{u, v, w};
    std::sort(key.begin(), key.end());
    auto it = std::lower_bound(triangles_.begin(), triangles_.end(), key);
    if (it == triangles_.end() || *it != key) return -1;
    return static_cast<int>(it - triangles_.begin());
}

SimplicialComplex2 build_complex(int n_vertices,
                                 std::span<const std::array<int, 3>> triangles,
                                 std::span<const std::array<int, 2>> extra_edges) {
    if (n_vertices < 0) throw std::invalid_argument("negative vertex count");

    auto check_vertex = [n_vertices](int v) {
        if (v < 0 || v >= n_vertices)
            throw std::invalid_argument("vertex id out of range: " + std::to_string(v));
    };

    SimplicialComplex2 sc;
    sc.n_vertices_ = n_vertices;

    std::vector<std::array<int, 3>> tris;
    tris.reserve(triangles.size());
    for (const auto& t : triangles) {
        std::array<int, 3> s = t;
        std::sort(s.begin(), s.end());
        for (int v : s) check_vertex(v);
        if (s[0] == s[1] || s[1] == s[2])
            throw std::invalid_argument("degenerate triangle with repeated vertex");
        tris.push_back(s);
    }
    std::sort(tris.begin(), tris.end());
    tris.erase(std::unique(tris.begin(), tris.end()), tris.end());

    std::vector<std::array<int, 2>> edges;
    edges.reserve(tris.size() * 3 + extra_edges.size());
    for (const auto& t : tris) {
        edges.push_back({t[0], t[1]});
        edges.push_back({t[0], t[2]});
        edges.push_back({t[1], t[2]});
    }
    for (const auto& e : extra_edges) {
        std::array<int, 2> s = e;
        if (s[0] > s[1]) std::swap(s[0], s[1]);
        check_vertex(s[0]);
        check_vertex(s[1]);
        if (s[0] == s[1]) throw std::invalid_argument("degenerate edge with repeated vertex");
        edges.push_back(s);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    sc.edges_ = std::move(edges);
    sc.triangles_ = std::move(tris);
    return sc;
}

PuncturedComplex::PuncturedComplex(const SimplicialComplex2& sc, std::vector<int> removed_ids)
    : base(&sc), removed(std::move(removed_ids)) {
    std::sort(removed.begin(), removed.end());
    removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
    for (int id : removed)
        if (id < 0 || id >= sc.n_triangles())
            throw std::out_of_range("removed triangle id out of range");
}

SparseOperator boundary_1(const SimplicialComplex2& sc) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(sc.n_edges()) * 2);
    const auto& edges = sc.edges();
    for (std::int32_t e = 0; e < sc.n_edges(); ++e) {
        t.push_back({edges[e][0], e, -1.0});
        t.push_back({edges[e][1], e, +1.0});
    }
    return SparseOperator(sc.n_vertices(), sc.n_edges(), std::move(t));
}

SparseOperator boundary_2(const SimplicialComplex2& sc, std::span<const int> removed) {
    std::vector<char> is_removed(static_cast<std::size_t>(sc.n_triangles()), 0);
    for (int id : removed) {
        if (id < 0 || id >= sc.n_triangles())
            throw std::out_of_range("removed triangle id out of range");
        is_removed[id] = 1;
    }

    std::vector<Triplet> t;
    std::int32_t col = 0;
    for (std::int32_t tri = 0; tri < sc.n_triangles(); ++tri) {
        if (is_removed[tri]) continue;
        const auto& [u, v, w] = sc.triangles()[tri];
        t.push_back({sc.edge_id(v, w), col, +1.0});
        t.push_back({sc.edge_id(u, w), col, -1.0});
        t.push_back({sc.edge_id(u, v), col, +1.0});
        ++col;
    }
    return SparseOperator(sc.n_edges(), col, std::move(t));
}

SparseOperator l1_up(const SimplicialComplex2& sc) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(sc.n_triangles()) * 9);
    for (const auto& [u, v, w] : sc.triangles()) {
        const std::array<std::int32_t, 3> e{sc.edge_id(v, w), sc.edge_id(u, w),
                                            sc.edge_id(u, v)};
        const std::array<double, 3> s{+1.0, -1.0, +1.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t.push_back({e[i], e[j], s[i] * s[j]});
    }
    return SparseOperator(sc.n_edges(), sc.n_edges(), std::move(t));
}

int dense_rank(const SparseOperator& op, double threshold) {
    const std::size_t m = static_cast<std::size_t>(op.rows());
    const std::size_t n = static_cast<std::size_t>(op.cols());
    if (m == 0 || n == 0) return 0;

    std::vector<double> a(m * n, 0.0);
    auto row_ptr = op.row_ptr();
    auto col_idx = op.col_idx();
    auto values = op.values();
    for (std::size_t r = 0; r < m; ++r)
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            a[r * n + col_idx[k]] = values[k];

    int rank = 0;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < n && pivot_row < m; ++c) {
        std::size_t best = pivot_row;
        double best_abs = std::abs(a[pivot_row * n + c]);
        for (std::size_t r = pivot_row + 1; r < m; ++r) {
            const double v = std::abs(a[r * n + c]);
            if (v > best_abs) {
                best = r;
                best_abs = v;
            }
        }
        if (best_abs <= threshold) continue;
        if (best != pivot_row)
            for (std::size_t j = c; j < n; ++j)
                std::swap(a[best * n + j], a[pivot_row * n + j]);
        const double inv = 1.0 / a[pivot_row * n + c];
        for (std::size_t r = pivot_row + 1; r < m; ++r) {
            const double f = a[r * n + c] * inv;
            if (f == 0.0) continue;
            a[r * n + c] = 0.0;
            for (std::size_t j = c + 1; j < n; ++j) a[r * n + j] -= f * a[pivot_row * n + j];
        }
        ++rank;
        ++pivot_row;
    }
    return rank;
}

std::pair<int, int> betti_numbers(const PuncturedComplex& pc) {
    const SimplicialComplex2& sc = *pc.base;
    if (sc.n_edges() > 2000)
        throw std::length_error("betti_numbers: dense rank limited to 2000 edges");

    const int rank_b1 = dense_rank(boundary_1(sc));
    const int rank_b2 = dense_rank(boundary_2(sc, pc.removed));
    const int beta0 = sc.n_vertices() - rank_b1;
    const int beta1 = sc.n_edges() - rank_b1 - rank_b2;
    return {beta0, beta1};
}

}  // namespace topolm
