#include <cmath>
#include <vector>

#include "doctest.h"
#include "topolm/kernels.hpp"
#include "topolm/rng.hpp"
#include "topolm/sparse.hpp"

using namespace topolm;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_unit() * 2.0 - 1.0;
    return v;
}

}  // namespace

TEST_CASE("simd backends match the scalar reference") {
    const auto& ref = kernels::scalar_backend();
    Rng rng(421);

    for (const std::string& name : kernels::available()) {
        kernels::force(name);
        const auto& k = kernels::active();
        CAPTURE(name);

        // sizes cover remainders around every vector width
        for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 64, 1023, 1024, 1025}) {
            std::vector<double> x = random_vec(rng, n);
            std::vector<double> y = random_vec(rng, n);

            const double d_ref = ref.dot(x.data(), y.data(), n);
            const double d = k.dot(x.data(), y.data(), n);
            CHECK(d == doctest::Approx(d_ref).epsilon(1e-13));

            const double dist_ref = ref.dist2(x.data(), y.data(), n);
            CHECK(k.dist2(x.data(), y.data(), n) ==
                  doctest::Approx(dist_ref).epsilon(1e-13));

            std::vector<double> y1 = y, y2 = y;
            ref.axpy(0.37, x.data(), y1.data(), n);
            k.axpy(0.37, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));

            y1 = y;
            y2 = y;
            ref.axpby(1.5, x.data(), -0.25, y1.data(), n);
            k.axpby(1.5, x.data(), -0.25, y2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));

            std::vector<double> x1 = x, x2 = x;
            ref.scal(-2.5, x1.data(), n);
            k.scal(-2.5, x2.data(), n);
            CHECK(x1 == x2);  // scaling is elementwise, bit-exact
        }
    }
    kernels::force("scalar");
}

TEST_CASE("sparse matvec equivalence across backends") {
    Rng rng(99);
    const std::int32_t rows = 57, cols = 43;
    std::vector<Triplet> t;
    for (int i = 0; i < 400; ++i)
        t.push_back({rng.index(rows), rng.index(cols), rng.next_unit() * 2.0 - 1.0});
    const SparseOperator A(rows, cols, std::move(t));
    const std::vector<double> x = random_vec(rng, cols);

    kernels::force("scalar");
    const std::vector<double> y_ref = A.apply(x);
    for (const std::string& name : kernels::available()) {
        kernels::force(name);
        const std::vector<double> y = A.apply(x);
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(y[i] == doctest::Approx(y_ref[i]).epsilon(1e-13));
    }
    kernels::force("scalar");
}

TEST_CASE("dot and dist2 basics") {
    const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<double> b{9, 8, 7, 6, 5, 4, 3, 2, 1};
    CHECK(kernels::active().dot(a.data(), b.data(), 9) == doctest::Approx(165.0));
    CHECK(kernels::active().dist2(a.data(), a.data(), 9) == 0.0);
}
