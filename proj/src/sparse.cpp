// SPDX-License-Identifier: Apache-2.0
#include "topolm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "topolm/kernels.hpp"

namespace topolm {

SparseOperator::SparseOperator(std::int32_t rows, std::int32_t cols,
                               std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative sparse dimensions");
    for (const Triplet& t : entries)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::out_of_range("sparse triplet outside matrix dimensions");

    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    col_idx_.reserve(entries.size());
    values_.reserve(entries.size());

    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            sum += entries[j].value;
            ++j;
        }
        if (sum != 0.0) {
            col_idx_.push_back(entries[i].col);
            values_.push_back(sum);
            ++row_ptr_[static_cast<std::size_t>(entries[i].row) + 1];
        }
        i = j;
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r)
        row_ptr_[r + 1] += row_ptr_[r];
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<std::int32_t>(x.size()) != cols_ ||
        static_cast<std::int32_t>(y.size()) != rows_)
        throw std::invalid_argument("sparse apply: size mismatch");
    kernels::active().spmv_csr(static_cast<std::size_t>(rows_), row_ptr_.data(),
                               col_idx_.data(), values_.data(), x.data(), y.data());
}

void SparseOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
    if (static_cast<std::int32_t>(x.size()) != rows_ ||
        static_cast<std::int32_t>(y.size()) != cols_)
        throw std::invalid_argument("sparse apply_transpose: size mismatch");
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows_); ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            y[col_idx_[k]] += values_[k] * xr;
    }
}

std::vector<double> SparseOperator::apply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(rows_));
    apply(x, y);
    return y;
}

std::vector<double> SparseOperator::apply_transpose(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(cols_));
    apply_transpose(x, y);
    return y;
}

double SparseOperator::norm1() const {
    std::vector<double> colsum(static_cast<std::size_t>(cols_), 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k)
        colsum[col_idx_[k]] += std::abs(values_[k]);
    double m = 0.0;
    for (double c : colsum) m = std::max(m, c);
    return m;
}

SparseOperator SparseOperator::transposed() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows_); ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.push_back({col_idx_[k], static_cast<std::int32_t>(r), values_[k]});
    return SparseOperator(cols_, rows_, std::move(t));
}

SparseOperator SparseOperator::multiply(const SparseOperator& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("sparse multiply: size mismatch");
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows_); ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const std::int32_t mid = col_idx_[k];
            const double va = values_[k];
            for (std::int64_t k2 = other.row_ptr_[mid]; k2 < other.row_ptr_[mid + 1]; ++k2)
                t.push_back({static_cast<std::int32_t>(r), other.col_idx_[k2],
                             va * other.values_[k2]});
        }
    return SparseOperator(rows_, other.cols_, std::move(t));
}

}  // namespace topolm
