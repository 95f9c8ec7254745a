#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "topolm/complex.hpp"
#include "topolm/datagen.hpp"
#include "topolm/rng.hpp"

using namespace topolm;

namespace {

/// brute-force empty-circumcircle check over all point-triangle pairs
void check_delaunay_property(const SimplicialComplex2& sc, double tol) {
    const auto& pts = sc.coords();
    for (const auto& [a, b, c] : sc.triangles()) {
        // circumcenter via perpendicular bisector intersection
        const double ax = pts[a][0], ay = pts[a][1];
        const double bx = pts[b][0], by = pts[b][1];
        const double cx = pts[c][0], cy = pts[c][1];
        const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        REQUIRE(std::abs(d) > 1e-14);
        const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                           (cx * cx + cy * cy) * (ay - by)) /
                          d;
        const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                           (cx * cx + cy * cy) * (bx - ax)) /
                          d;
        const double r = std::hypot(ax - ux, ay - uy);
        for (int p = 0; p < sc.n_vertices(); ++p) {
            if (p == a || p == b || p == c) continue;
            const double dist = std::hypot(pts[p][0] - ux, pts[p][1] - uy);
            CHECK(dist >= r - tol * std::max(1.0, r));
        }
    }
}

}  // namespace

TEST_CASE("triangulating three points") {
    const auto sc = delaunay_complex(3, 5);
    CHECK(sc.n_triangles() == 1);
    CHECK(sc.n_edges() == 3);
}

TEST_CASE("delaunay complex is a triangulated disk") {
    for (std::uint64_t seed : {1u, 7u, 42u}) {
        const auto sc = delaunay_complex(200, seed);
        check_delaunay_property(sc, 1e-9);

        // Euler characteristic of a disk
        CHECK(sc.n_vertices() - sc.n_edges() + sc.n_triangles() == 1);
        const auto [b0, b1] = betti_numbers(PuncturedComplex(sc, {}));
        CHECK(b0 == 1);
        CHECK(b1 == 0);

        // closure: every triangle edge present (build_complex guarantees it,
        // re-check through the public tables)
        for (const auto& [u, v, w] : sc.triangles()) {
            CHECK(sc.edge_id(u, v) >= 0);
            CHECK(sc.edge_id(u, w) >= 0);
            CHECK(sc.edge_id(v, w) >= 0);
        }
    }
}

TEST_CASE("delaunay is deterministic per seed") {
    const auto a = delaunay_complex(150, 33);
    const auto b = delaunay_complex(150, 33);
    CHECK(a.triangles() == b.triangles());
    CHECK(a.coords() == b.coords());
    const auto c = delaunay_complex(150, 34);
    CHECK(a.triangles() != c.triangles());
}

TEST_CASE("delaunay rejects tiny inputs") {
    CHECK_THROWS_AS(delaunay_complex(2, 1), std::invalid_argument);
}

TEST_CASE("cocircular points get a consistent diagonal") {
    // exercised through the predicates directly: the square corners are
    // exactly cocircular, the filter must return 0
    CHECK(incircle_sign(0, 0, 1, 0, 1, 1, 0, 1) == 0);
    CHECK(orient2d_sign(0, 0, 1, 0, 2, 0) == 0);
    CHECK(orient2d_sign(0, 0, 1, 0, 1, 1) == 1);
    CHECK(incircle_sign(0, 0, 1, 0, 0, 1, 0.25, 0.25) == 1);
    CHECK(incircle_sign(0, 0, 1, 0, 0, 1, 2.0, 2.0) == -1);
}

TEST_CASE("trajectory classes follow inflated shortest paths") {
    const auto sc = delaunay_complex(120, 11);

    // alpha = 1 keeps every path identical
    const auto same = trajectory_class(sc, 99, 4, 1.0);
    for (std::size_t i = 1; i < same.size(); ++i)
        CHECK(same[i].vertices == same[0].vertices);

    const auto paths = trajectory_class(sc, 99, 6, 2.0);
    REQUIRE(paths.size() == 6);
    const int src = paths[0].vertices.front();
    const int dst = paths[0].vertices.back();
    for (const auto& t : paths) {
        CHECK(t.vertices.front() == src);  // shared endpoints
        CHECK(t.vertices.back() == dst);
        // simple paths: no vertex repeats
        std::set<int> seen(t.vertices.begin(), t.vertices.end());
        CHECK(seen.size() == t.vertices.size());
        // valid on the complex
        for (std::size_t i = 0; i + 1 < t.vertices.size(); ++i)
            CHECK(sc.edge_id(t.vertices[i], t.vertices[i + 1]) >= 0);
    }

    // first path minimizes Euclidean length: check against an independent
    // Bellman-Ford relaxation
    const auto& pts = sc.coords();
    std::vector<double> dist(sc.n_vertices(), std::numeric_limits<double>::infinity());
    dist[src] = 0.0;
    for (int round = 0; round < sc.n_vertices(); ++round)
        for (const auto& [u, v] : sc.edges()) {
            const double w = std::hypot(pts[u][0] - pts[v][0], pts[u][1] - pts[v][1]);
            dist[v] = std::min(dist[v], dist[u] + w);
            dist[u] = std::min(dist[u], dist[v] + w);
        }
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < paths[0].vertices.size(); ++i) {
        const int u = paths[0].vertices[i], v = paths[0].vertices[i + 1];
        len += std::hypot(pts[u][0] - pts[v][0], pts[u][1] - pts[v][1]);
    }
    CHECK(len == doctest::Approx(dist[dst]).epsilon(1e-9));
}

TEST_CASE("make_dataset: counts, split, determinism") {
    SynthConfig cfg;
    cfg.n_points = 80;
    cfg.n_classes = 3;
    cfg.n_train_per_class = 5;
    cfg.n_test_per_class = 50;
    cfg.seed = 5;

    const Dataset ds = make_dataset(cfg);
    CHECK(ds.train.size() == 15);
    CHECK(ds.test.size() == 150);
    for (int c = 0; c < 3; ++c) {
        const auto count = [c](const std::vector<Trajectory>& ts) {
            std::size_t n = 0;
            for (const auto& t : ts)
                if (t.label == c) ++n;
            return n;
        };
        CHECK(count(ds.train) == 5);
        CHECK(count(ds.test) == 50);
    }
    for (const auto& t : ds.train)
        for (std::size_t i = 0; i + 1 < t.vertices.size(); ++i)
            CHECK(ds.complex.edge_id(t.vertices[i], t.vertices[i + 1]) >= 0);

    const Dataset again = make_dataset(cfg);
    CHECK(again.complex.triangles() == ds.complex.triangles());
    REQUIRE(again.train.size() == ds.train.size());
    for (std::size_t i = 0; i < ds.train.size(); ++i)
        CHECK(again.train[i].vertices == ds.train[i].vertices);
}

TEST_CASE("make_dataset validates its config") {
    SynthConfig cfg;
    cfg.n_points = 5;
    CHECK_THROWS_AS(make_dataset(cfg), std::invalid_argument);
    cfg.n_points = 50;
    cfg.weight_inflation = 1.0;
    CHECK_THROWS_AS(make_dataset(cfg), std::invalid_argument);
    cfg.weight_inflation = 2.0;
    cfg.boundary_margin = 0.5;
    CHECK_THROWS_AS(make_dataset(cfg), std::invalid_argument);
}
