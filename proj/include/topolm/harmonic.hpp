// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/flow.hpp"

namespace topolm {

/// Unit-norm edge flow circulating around the hole left by removing one
/// triangle: gradient-free and curl-free on the punctured complex.
struct HarmonicVector {
    int hole = -1;  // triangle id
    EdgeFlow values;
};

struct HarmonicOptions {
    double lsq_tol = 1e-10;          // relative normal-equation residual
    double degeneracy_rel = 1e-6;    // residual below this times ||b|| => no new hole
    int max_iter_factor = 10;        // iteration cap = factor * n_edges
};

/// Residual of projecting the removed triangle's boundary off the span of the
/// remaining triangle boundaries, normalized; the sign is fixed so the entry
/// of largest magnitude (ties: lowest edge id) is positive. Returns nullopt
/// when the removal creates no new harmonic direction (degenerate hole).
std::optional<HarmonicVector> compute_harmonic(const SimplicialComplex2& sc, int sigma2,
                                               const HarmonicOptions& opts = {});

/// Memo table triangle id -> harmonic vector (nullopt marks degenerate holes).
/// Concurrent get_or_compute calls are safe; duplicated work is identical.
class HarmonicCache {
  public:
    explicit HarmonicCache(HarmonicOptions opts = {}) : opts_(opts) {}

    const std::optional<HarmonicVector>& get_or_compute(const SimplicialComplex2& sc,
                                                        int sigma2);

    const HarmonicOptions& options() const { return opts_; }
    std::size_t size() const;
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

  private:
    HarmonicOptions opts_;
    mutable std::mutex mu_;
    std::unordered_map<int, std::optional<HarmonicVector>> table_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

/// Per-hole harmonic vectors h_1..h_k, each computed on its own punctured
/// complex; column order matches the hole tuple.
struct HarmonicBasis {
    std::vector<HarmonicVector> columns;
    std::int32_t size() const { return static_cast<std::int32_t>(columns.size()); }
};

/// Row-major (n_rows x dims) matrix of harmonic coordinates.
struct EmbeddingMatrix {
    std::int32_t n_rows = 0;
    std::int32_t dims = 0;
    std::vector<double> data;

    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::int32_t rows, std::int32_t d)
        : n_rows(rows), dims(d), data(static_cast<std::size_t>(rows) * d, 0.0) {}

    double* row(std::int32_t i) { return data.data() + static_cast<std::size_t>(i) * dims; }
    const double* row(std::int32_t i) const {
        return data.data() + static_cast<std::size_t>(i) * dims;
    }
};

/// entry (j, i) = h_i . f_j; plain inner products, no re-orthogonalization.
EmbeddingMatrix embed(const HarmonicBasis& basis, const FlowMatrix& flows);

}  // namespace topolm
