// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "topolm/sparse.hpp"

namespace topolm {

struct LsqResult {
    std::vector<double> x;         // argmin ||b - A x||_2 (minimum-norm iterate)
    std::vector<double> residual;  // b - A x
    double normal_residual = 0.0;  // ||A^T (b - A x)||_2 at exit
    int iterations = 0;
    bool converged = false;
};

/// Conjugate gradient on the normal equations (CGLS). Stops when
/// ||A^T r|| <= tol * ||A^T b|| or after max_iters. Handles rank-deficient A:
/// started from zero the iterates stay in range(A^T), so the residual is the
/// unique least-squares residual.
LsqResult cgls(const SparseOperator& A, std::span<const double> b, double tol,
               int max_iters);

}  // namespace topolm
