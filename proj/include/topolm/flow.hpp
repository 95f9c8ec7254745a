// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/sparse.hpp"

namespace topolm {

/// A trajectory is a vertex sequence where consecutive vertices are joined by
/// an edge of the complex.
struct Trajectory {
    std::vector<int> vertices;
    std::optional<int> label;
};

using EdgeFlow = std::vector<double>;

/// One edge flow per trajectory, stored column-major (n_edges x n_columns).
struct FlowMatrix {
    std::int32_t n_edges = 0;
    std::int32_t n_columns = 0;
    std::vector<double> data;  // column-major

    FlowMatrix() = default;
    FlowMatrix(std::int32_t edges, std::int32_t columns)
        : n_edges(edges), n_columns(columns),
          data(static_cast<std::size_t>(edges) * columns, 0.0) {}

    double* column(std::int32_t j) { return data.data() + static_cast<std::size_t>(j) * n_edges; }
    const double* column(std::int32_t j) const {
        return data.data() + static_cast<std::size_t>(j) * n_edges;
    }
    std::span<const double> column_span(std::int32_t j) const {
        return {column(j), static_cast<std::size_t>(n_edges)};
    }
};

/// Signed traversal counts of a trajectory: +1 per low-to-high traversal of an
/// edge, -1 per high-to-low, summed over repeats. Throws std::invalid_argument
/// when consecutive vertices are not joined by an edge.
EdgeFlow flow_embed(const Trajectory& t, const SimplicialComplex2& sc);

/// flow_embed over a batch; a failure reports the offending trajectory index.
FlowMatrix embed_all(std::span<const Trajectory> ts, const SimplicialComplex2& sc);

struct ExpmOptions {
    double rel_tol = 1e-7;        // per-column relative 2-norm error target
    int max_terms_per_step = 96;  // Taylor terms before giving up on one step
};

/// Thrown when the truncated series fails to reach the target within the term
/// budget; carries the relative term size actually achieved.
struct ExpmConvergenceError : std::runtime_error {
    double achieved;
    ExpmConvergenceError(const std::string& msg, double achieved_rel)
        : std::runtime_error(msg), achieved(achieved_rel) {}
};

/// exp(-op * tau) * X for a symmetric PSD operator, computed column by column
/// with a scaled truncated Taylor series of matrix-vector products. No dense
/// exponential is ever formed.
FlowMatrix expm_action(const SparseOperator& op, const FlowMatrix& X, double tau,
                       const ExpmOptions& opts = {});

/// Largest-eigenvalue estimate by seeded power iteration (symmetric PSD op).
double spectral_radius_estimate(const SparseOperator& op, int max_iters = 200,
                                double rel_tol = 1e-9);

/// tau_scale / lambda_max(L1_up); 0 when the complex has no triangles.
double default_diffusion_tau(const SparseOperator& l1up, double tau_scale = 2.0);

/// Heat-kernel damping of the curl components: each column becomes
/// exp(-L1_up * tau) * column. Gradient and harmonic parts of the full
/// complex are preserved. Throws std::invalid_argument for tau < 0.
FlowMatrix diffuse(const FlowMatrix& flows, const SimplicialComplex2& sc, double tau,
                   const ExpmOptions& opts = {});

}  // namespace topolm
