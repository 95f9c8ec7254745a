// SPDX-License-Identifier: Apache-2.0
#include "topolm/harmonic.hpp"

#include <cmath>
#include <stdexcept>

#include "topolm/kernels.hpp"
#include "topolm/lsq.hpp"

namespace topolm {

std::optional<HarmonicVector> compute_harmonic(const SimplicialComplex2& sc, int sigma2,
                                               const HarmonicOptions& opts) {
    if (sigma2 < 0 || sigma2 >= sc.n_triangles())
        throw std::out_of_range("compute_harmonic: triangle id out of range");
    if (!(opts.lsq_tol > 0.0) || opts.lsq_tol > 1e-4)
        throw std::invalid_argument("compute_harmonic: lsq_tol must be in (0, 1e-4]");

    const std::size_t n = static_cast<std::size_t>(sc.n_edges());
    const auto& [u, v, w] = sc.triangles()[sigma2];
    EdgeFlow b(n, 0.0);
    b[sc.edge_id(v, w)] = +1.0;
    b[sc.edge_id(u, w)] = -1.0;
    b[sc.edge_id(u, v)] = +1.0;

    const int hole[] = {sigma2};
    const SparseOperator A = boundary_2(sc, hole);
    const LsqResult lsq = cgls(A, b, opts.lsq_tol, opts.max_iter_factor * sc.n_edges());

    const auto& K = kernels::active();
    const double res_norm = std::sqrt(K.dot(lsq.residual.data(), lsq.residual.data(), n));
    const double b_norm = std::sqrt(K.dot(b.data(), b.data(), n));
    if (res_norm < opts.degeneracy_rel * b_norm) return std::nullopt;

    HarmonicVector h;
    h.hole = sigma2;
    h.values = lsq.residual;
    K.scal(1.0 / res_norm, h.values.data(), n);

    // deterministic sign: largest-magnitude entry (ties: lowest edge id) positive
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(h.values[i]);
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (h.values[arg] < 0.0) K.scal(-1.0, h.values.data(), n);
    return h;
}

const std::optional<HarmonicVector>& HarmonicCache::get_or_compute(
    const SimplicialComplex2& sc, int sigma2) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = table_.find(sigma2);
        if (it != table_.end()) {
            ++hits_;
            return it->second;
        }
    }
    std::optional<HarmonicVector> h = compute_harmonic(sc, sigma2, opts_);
    std::lock_guard<std::mutex> lock(mu_);
    ++misses_;
    // insert-if-absent: a racing writer computed the identical value
    auto [it, inserted] = table_.emplace(sigma2, std::move(h));
    return it->second;
}

std::size_t HarmonicCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return table_.size();
}

EmbeddingMatrix embed(const HarmonicBasis& basis, const FlowMatrix& flows) {
    const std::int32_t k = basis.size();
    for (const HarmonicVector& h : basis.columns)
        if (static_cast<std::int32_t>(h.values.size()) != flows.n_edges)
            throw std::invalid_argument("embed: basis/flow dimension mismatch");

    const auto& K = kernels::active();
    EmbeddingMatrix e(flows.n_columns, k);
    for (std::int32_t j = 0; j < flows.n_columns; ++j) {
        double* row = e.row(j);
        for (std::int32_t i = 0; i < k; ++i)
            row[i] = K.dot(basis.columns[i].values.data(), flows.column(j),
                           static_cast<std::size_t>(flows.n_edges));
    }
    return e;
}

}  // namespace topolm
