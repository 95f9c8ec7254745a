// SPDX-License-Identifier: Apache-2.0
#include "topolm/kernels.hpp"

namespace topolm::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double a, const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dist2_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

void spmv_csr_scalar(std::size_t rows, const std::int64_t* row_ptr,
                     const std::int32_t* cols, const double* vals,
                     const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            acc += vals[k] * x[cols[k]];
        y[r] = acc;
    }
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{"scalar",    dot_scalar,   axpy_scalar,
                           axpby_scalar, scal_scalar, dist2_scalar,
                           spmv_csr_scalar};
    return b;
}

}  // namespace topolm::kernels
