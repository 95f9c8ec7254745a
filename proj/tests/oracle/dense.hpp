// Test-only dense linear-algebra oracles built on Eigen. These deliberately
// take a different computational route than the library (dense
// eigendecompositions and SVD ranks instead of sparse iterations) so the two
// sides check each other.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "topolm/complex.hpp"
#include "topolm/sparse.hpp"

namespace oracle {

inline Eigen::MatrixXd to_dense(const topolm::SparseOperator& op) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(op.rows(), op.cols());
    auto row_ptr = op.row_ptr();
    auto col_idx = op.col_idx();
    auto values = op.values();
    for (std::int64_t r = 0; r < op.rows(); ++r)
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            m(r, col_idx[k]) = values[k];
    return m;
}

inline Eigen::MatrixXd dense_l1(const topolm::SimplicialComplex2& sc,
                                std::span<const int> removed = {}) {
    const Eigen::MatrixXd b1 = to_dense(topolm::boundary_1(sc));
    const Eigen::MatrixXd b2 = to_dense(topolm::boundary_2(sc, removed));
    return b1.transpose() * b1 + b2 * b2.transpose();
}

/// columns spanning the kernel (eigenvalues below threshold)
inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& sym, double threshold = 1e-8) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    int dim = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i]) < threshold) ++dim;
    Eigen::MatrixXd basis(sym.rows(), dim);
    int at = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i]) < threshold) basis.col(at++) = es.eigenvectors().col(i);
    return basis;
}

inline int kernel_dim(const Eigen::MatrixXd& sym, double threshold = 1e-8) {
    return static_cast<int>(kernel_basis(sym, threshold).cols());
}

inline int svd_rank(const Eigen::MatrixXd& m, double threshold = 1e-8) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > threshold) ++rank;
    return rank;
}

/// exp(-A * tau) via dense symmetric eigendecomposition
inline Eigen::MatrixXd dense_expm_neg(const Eigen::MatrixXd& sym, double tau) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd damped = (-tau * es.eigenvalues().array()).exp();
    return es.eigenvectors() * damped.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace oracle
