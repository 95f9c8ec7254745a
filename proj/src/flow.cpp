// SPDX-License-Identifier: Apache-2.0
#include "topolm/flow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "topolm/kernels.hpp"
#include "topolm/rng.hpp"

namespace topolm {

EdgeFlow flow_embed(const Trajectory& t, const SimplicialComplex2& sc) {
    if (t.vertices.size() < 2)
        throw std::invalid_argument("trajectory must traverse at least one edge");
    EdgeFlow f(static_cast<std::size_t>(sc.n_edges()), 0.0);
    for (std::size_t i = 0; i + 1 < t.vertices.size(); ++i) {
        const int a = t.vertices[i];
        const int b = t.vertices[i + 1];
        const int e = sc.edge_id(a, b);
        if (e < 0)
            throw std::invalid_argument("trajectory step (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") is not an edge");
        f[e] += a < b ? 1.0 : -1.0;
    }
    return f;
}

FlowMatrix embed_all(std::span<const Trajectory> ts, const SimplicialComplex2& sc) {
    FlowMatrix m(sc.n_edges(), static_cast<std::int32_t>(ts.size()));
    for (std::size_t j = 0; j < ts.size(); ++j) {
        try {
            EdgeFlow f = flow_embed(ts[j], sc);
            std::copy(f.begin(), f.end(), m.column(static_cast<std::int32_t>(j)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("trajectory " + std::to_string(j) + ": " + e.what());
        }
    }
    return m;
}

FlowMatrix expm_action(const SparseOperator& op, const FlowMatrix& X, double tau,
                       const ExpmOptions& opts) {
    if (op.rows() != op.cols()) throw std::invalid_argument("expm_action: operator not square");
    if (op.rows() != X.n_edges) throw std::invalid_argument("expm_action: size mismatch");
    if (tau < 0.0) throw std::invalid_argument("expm_action: negative tau");
    if (!(opts.rel_tol > 0.0) || opts.rel_tol > 1e-3)
        throw std::invalid_argument("expm_action: rel_tol must be in (0, 1e-3]");

    FlowMatrix out = X;
    const double scaled_norm = op.norm1() * tau;
    if (scaled_norm == 0.0 || X.n_columns == 0) return out;

    // Split exp(-A*tau) into s sub-steps with ||A*tau/s||_1 <= 1 so each
    // Taylor series converges superlinearly; alternate terms so the tail is
    // bounded by the last kept term.
    const int steps = static_cast<int>(std::ceil(scaled_norm));
    const double h = tau / steps;
    const double step_tol = opts.rel_tol / (2.0 * steps);

    const std::size_t n = static_cast<std::size_t>(op.rows());
    const auto& K = kernels::active();
    std::vector<double> term(n), next(n), acc(n);

    for (std::int32_t j = 0; j < X.n_columns; ++j) {
        double* col = out.column(j);
        for (int s = 0; s < steps; ++s) {
            std::copy(col, col + n, term.begin());
            std::copy(col, col + n, acc.begin());
            bool converged = false;
            double last_rel = 0.0;
            for (int k = 1; k <= opts.max_terms_per_step; ++k) {
                op.apply(term, next);
                K.scal(-h / k, next.data(), n);
                term.swap(next);
                K.axpy(1.0, term.data(), acc.data(), n);
                const double tn = std::sqrt(K.dot(term.data(), term.data(), n));
                const double an = std::sqrt(K.dot(acc.data(), acc.data(), n));
                last_rel = an > 0.0 ? tn / an : tn;
                if (tn <= step_tol * std::max(an, 1e-300)) {
                    converged = true;
                    break;
                }
            }
            if (!converged)
                throw ExpmConvergenceError(
                    "expm_action: series not converged within term budget", last_rel);
            std::copy(acc.begin(), acc.end(), col);
        }
    }
    return out;
}

double spectral_radius_estimate(const SparseOperator& op, int max_iters, double rel_tol) {
    const std::size_t n = static_cast<std::size_t>(op.rows());
    if (n == 0 || op.nnz() == 0) return 0.0;

    Rng rng(0x7a11b0b5u);
    std::vector<double> v(n), w(n);
    for (double& x : v) x = rng.next_unit() - 0.5;

    const auto& K = kernels::active();
    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        const double norm = std::sqrt(K.dot(v.data(), v.data(), n));
        if (norm == 0.0) return 0.0;
        K.scal(1.0 / norm, v.data(), n);
        op.apply(v, w);
        const double next = K.dot(v.data(), w.data(), n);  // Rayleigh quotient
        v.swap(w);
        if (it > 0 && std::abs(next - lambda) <= rel_tol * std::max(std::abs(next), 1e-30)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

double default_diffusion_tau(const SparseOperator& l1up, double tau_scale) {
    const double lambda = spectral_radius_estimate(l1up);
    return lambda > 0.0 ? tau_scale / lambda : 0.0;
}

FlowMatrix diffuse(const FlowMatrix& flows, const SimplicialComplex2& sc, double tau,
                   const ExpmOptions& opts) {
    if (tau < 0.0) throw std::invalid_argument("diffuse: negative tau");
    if (flows.n_edges != sc.n_edges())
        throw std::invalid_argument("diffuse: flows not indexed on this complex");
    if (tau == 0.0) return flows;
    return expm_action(l1_up(sc), flows, tau, opts);
}

}  // namespace topolm
