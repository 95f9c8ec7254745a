#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracle/dense.hpp"
#include "oracle/gen.hpp"
#include "topolm/datagen.hpp"
#include "topolm/harmonic.hpp"
#include "topolm/kernels.hpp"
#include "topolm/rng.hpp"

using namespace topolm;

namespace {

const std::vector<std::array<int, 3>> kSquare{{0, 1, 2}, {0, 2, 3}};

double cosine(const EdgeFlow& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd av = oracle::to_eigen(a);
    return av.dot(b) / (av.norm() * b.norm());
}

}  // namespace

TEST_CASE("harmonic vector of a punctured square matches the dense kernel") {
    const auto square = build_complex(4, kSquare);
    const int hole = square.triangle_id(0, 1, 2);
    const auto h = compute_harmonic(square, hole);
    REQUIRE(h.has_value());

    const int removed[] = {hole};
    const Eigen::MatrixXd kernel = oracle::kernel_basis(oracle::dense_l1(square, removed));
    REQUIRE(kernel.cols() == 1);
    CHECK(std::abs(cosine(h->values, kernel.col(0))) >= 1.0 - 1e-8);

    // unit norm, gradient-free, curl-free on the punctured complex
    const auto& K = kernels::active();
    CHECK(std::sqrt(K.dot(h->values.data(), h->values.data(), h->values.size())) ==
          doctest::Approx(1.0).epsilon(1e-10));
    for (double div : boundary_1(square).apply(h->values))
        CHECK(std::abs(div) <= 1e-8);
    for (double curl : boundary_2(square, removed).apply_transpose(h->values))
        CHECK(std::abs(curl) <= 1e-8);
}

TEST_CASE("removing a lone triangle yields its normalized boundary") {
    const auto tri = build_complex(3, std::vector<std::array<int, 3>>{{0, 1, 2}});
    const auto h = compute_harmonic(tri, 0);
    REQUIRE(h.has_value());
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(h->values[tri.edge_id(0, 1)] == doctest::Approx(+s));
    CHECK(h->values[tri.edge_id(0, 2)] == doctest::Approx(-s));
    CHECK(h->values[tri.edge_id(1, 2)] == doctest::Approx(+s));
}

TEST_CASE("tetrahedron surface face removal is degenerate") {
    const auto tet = build_complex(
        4, std::vector<std::array<int, 3>>{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    for (int face = 0; face < 4; ++face)
        CHECK_FALSE(compute_harmonic(tet, face).has_value());
}

TEST_CASE("harmonic sign convention is deterministic") {
    const auto sc = delaunay_complex(60, 41);
    for (int tri : {0, sc.n_triangles() / 2, sc.n_triangles() - 1}) {
        const auto a = compute_harmonic(sc, tri);
        const auto b = compute_harmonic(sc, tri);
        REQUIRE(a.has_value());
        CHECK(a->values == b->values);  // bit-identical
        std::size_t arg = 0;
        for (std::size_t e = 1; e < a->values.size(); ++e)
            if (std::abs(a->values[e]) > std::abs(a->values[arg])) arg = e;
        CHECK(a->values[arg] > 0.0);
    }
}

TEST_CASE("harmonic oracle equivalence on random punctures") {
    Rng rng(314);
    for (int trial = 0; trial < 8; ++trial) {
        const auto sc = delaunay_complex(30 + 8 * trial, 1000 + trial);
        REQUIRE(sc.n_edges() <= 300);
        const int hole = rng.index(sc.n_triangles());
        const auto h = compute_harmonic(sc, hole);
        REQUIRE(h.has_value());

        const int removed[] = {hole};
        const Eigen::MatrixXd kernel =
            oracle::kernel_basis(oracle::dense_l1(sc, removed));
        REQUIRE(kernel.cols() == 1);
        CHECK(std::abs(cosine(h->values, kernel.col(0))) >= 1.0 - 1e-8);
    }
}

TEST_CASE("embeddings depend only on the homology class") {
    const auto sc = delaunay_complex(50, 67);
    Rng rng(5150);
    const int hole = rng.index(sc.n_triangles());
    const auto h = compute_harmonic(sc, hole);
    REQUIRE(h.has_value());

    const int removed[] = {hole};
    const SparseOperator b2p = boundary_2(sc, removed);
    const SparseOperator b1 = boundary_1(sc);
    const auto& K = kernels::active();

    for (int trial = 0; trial < 10; ++trial) {
        EdgeFlow f = oracle::random_flow(rng, sc.n_edges());
        std::vector<double> x(static_cast<std::size_t>(b2p.cols()));
        for (double& v : x) v = rng.next_unit() * 2.0 - 1.0;
        std::vector<double> y(static_cast<std::size_t>(sc.n_vertices()));
        for (double& v : y) v = rng.next_unit() * 2.0 - 1.0;

        EdgeFlow shifted = f;
        const std::vector<double> curl = b2p.apply(x);
        const std::vector<double> grad = b1.apply_transpose(y);
        for (std::int32_t e = 0; e < sc.n_edges(); ++e) shifted[e] += curl[e] + grad[e];

        const double p0 = K.dot(h->values.data(), f.data(), f.size());
        const double p1 = K.dot(h->values.data(), shifted.data(), shifted.size());
        CHECK(std::abs(p0 - p1) <= 1e-8);
    }
}

TEST_CASE("cache is transparent and counts hits") {
    const auto sc = delaunay_complex(35, 11);
    HarmonicCache cache;
    const auto& first = cache.get_or_compute(sc, 3);
    const auto& again = cache.get_or_compute(sc, 3);
    REQUIRE(first.has_value());
    CHECK(first->values == again->values);
    CHECK(cache.hits() == 1);
    CHECK(cache.misses() == 1);

    const auto direct = compute_harmonic(sc, 3, cache.options());
    CHECK(direct->values == first->values);  // with/without cache identical
}

TEST_CASE("embed produces inner products") {
    const auto ring = oracle::ring_complex(6);
    const auto h0 = compute_harmonic(ring, 0);
    const auto h5 = compute_harmonic(ring, 5);
    REQUIRE(h0.has_value());
    REQUIRE(h5.has_value());
    HarmonicBasis basis{{*h0, *h5}};

    FlowMatrix zero(ring.n_edges(), 1);
    EmbeddingMatrix e0 = embed(basis, zero);
    CHECK(e0.row(0)[0] == 0.0);
    CHECK(e0.row(0)[1] == 0.0);

    FlowMatrix self(ring.n_edges(), 1);
    std::copy(h0->values.begin(), h0->values.end(), self.column(0));
    EmbeddingMatrix e1 = embed(basis, self);
    CHECK(e1.row(0)[0] == doctest::Approx(1.0).epsilon(1e-12));
    const auto& K = kernels::active();
    CHECK(e1.row(0)[1] ==
          doctest::Approx(K.dot(h5->values.data(), h0->values.data(), h0->values.size())));
}

TEST_CASE("winding a ring loop scales the embedding linearly") {
    const auto ring = oracle::ring_complex(7);
    const auto h = compute_harmonic(ring, 0);
    REQUIRE(h.has_value());
    HarmonicBasis basis{{*h}};

    std::vector<int> once;
    for (int i = 0; i <= 7; ++i) once.push_back(i % 7);  // inner cycle
    std::vector<int> twice = once;
    for (int i = 1; i <= 7; ++i) twice.push_back(i % 7);

    const EmbeddingMatrix e1 = embed(basis, embed_all(std::vector<Trajectory>{{once, {}}}, ring));
    const EmbeddingMatrix e2 = embed(basis, embed_all(std::vector<Trajectory>{{twice, {}}}, ring));
    CHECK(std::abs(e1.row(0)[0]) > 0.1);  // the loop is seen
    CHECK(e2.row(0)[0] == doctest::Approx(2.0 * e1.row(0)[0]).epsilon(1e-12));
}

TEST_CASE("lsq_tol outside its range is rejected") {
    const auto tri = build_complex(3, std::vector<std::array<int, 3>>{{0, 1, 2}});
    HarmonicOptions opts;
    opts.lsq_tol = 1e-3;
    CHECK_THROWS_AS(compute_harmonic(tri, 0, opts), std::invalid_argument);
    CHECK_THROWS_AS(compute_harmonic(tri, 5), std::out_of_range);
}
