// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace topolm {

/// One (row, col, value) entry used while assembling an operator.
struct Triplet {
    std::int32_t row;
    std::int32_t col;
    double value;
};

/// Compressed sparse row matrix. Duplicate (row, col) pairs are combined at
/// build time; explicit zeros produced by cancellation are dropped.
class SparseOperator {
  public:
    SparseOperator() = default;
    SparseOperator(std::int32_t rows, std::int32_t cols, std::vector<Triplet> entries);

    std::int32_t rows() const { return rows_; }
    std::int32_t cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    std::span<const std::int64_t> row_ptr() const { return row_ptr_; }
    std::span<const std::int32_t> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// y = A x (y overwritten; sizes must match)
    void apply(std::span<const double> x, std::span<double> y) const;
    /// y = A^T x (y overwritten)
    void apply_transpose(std::span<const double> x, std::span<double> y) const;

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

    /// max column abs-sum == max row abs-sum for symmetric operators
    double norm1() const;

    SparseOperator transposed() const;

    /// C = A * B (small helper for identity checks; not performance-critical)
    SparseOperator multiply(const SparseOperator& other) const;

  private:
    std::int32_t rows_ = 0;
    std::int32_t cols_ = 0;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> col_idx_;
    std::vector<double> values_;
};

}  // namespace topolm
