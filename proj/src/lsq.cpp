// SPDX-License-Identifier: Apache-2.0
#include "topolm/lsq.hpp"

#include <cmath>
#include <stdexcept>

#include "topolm/kernels.hpp"

namespace topolm {

LsqResult cgls(const SparseOperator& A, std::span<const double> b, double tol,
               int max_iters) {
    if (static_cast<std::int32_t>(b.size()) != A.rows())
        throw std::invalid_argument("cgls: rhs size mismatch");

    const std::size_t m = static_cast<std::size_t>(A.rows());
    const std::size_t n = static_cast<std::size_t>(A.cols());
    const auto& K = kernels::active();

    LsqResult out;
    out.x.assign(n, 0.0);
    out.residual.assign(b.begin(), b.end());
    if (n == 0) {
        out.converged = true;
        return out;
    }

    std::vector<double> s(n), p(n), q(m);
    A.apply_transpose(out.residual, s);
    p = s;
    double gamma = K.dot(s.data(), s.data(), n);
    const double target = tol * std::sqrt(gamma);

    int it = 0;
    for (; it < max_iters; ++it) {
        if (std::sqrt(gamma) <= target) {
            out.converged = true;
            break;
        }
        A.apply(p, q);
        const double qq = K.dot(q.data(), q.data(), m);
        if (qq == 0.0) {
            // p lies in the null space; the normal residual is already 0
            out.converged = std::sqrt(gamma) <= target;
            break;
        }
        const double alpha = gamma / qq;
        K.axpy(alpha, p.data(), out.x.data(), n);
        K.axpy(-alpha, q.data(), out.residual.data(), m);
        A.apply_transpose(out.residual, s);
        const double gamma_next = K.dot(s.data(), s.data(), n);
        K.axpby(1.0, s.data(), gamma_next / gamma, p.data(), n);
        gamma = gamma_next;
    }
    if (!out.converged && std::sqrt(gamma) <= target) out.converged = true;
    out.normal_residual = std::sqrt(gamma);
    out.iterations = it;
    return out;
}

}  // namespace topolm
