// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace topolm::kernels {

/// Dense/sparse arithmetic primitives used by the solver and scoring inner
/// loops. Every entry has a scalar reference implementation; on x86-64 an
/// AVX2+FMA variant and on aarch64 a NEON variant are selected at runtime.
struct Backend {
    const char* name;

    /// sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    /// y[i] = a*x[i] + b*y[i]
    void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
    /// x[i] *= a
    void (*scal)(double a, double* x, std::size_t n);
    /// sum_i (x[i]-y[i])^2
    double (*dist2)(const double* x, const double* y, std::size_t n);
    /// y = A*x for CSR (row_ptr has rows+1 entries); y is overwritten
    void (*spmv_csr)(std::size_t rows, const std::int64_t* row_ptr,
                     const std::int32_t* cols, const double* vals,
                     const double* x, double* y);
};

const Backend& scalar_backend();

/// Backend chosen at first use: env var TOPOLM_KERNELS ("scalar", "avx2",
/// "neon") overrides CPU detection.
const Backend& active();

/// Override the active backend (tests). Throws std::invalid_argument if the
/// named backend is not compiled in or not supported by this CPU.
void force(const std::string& name);

/// Names of all backends usable on this machine, scalar first.
std::vector<std::string> available();

inline double nrm2sq(const double* x, std::size_t n) { return active().dot(x, x, n); }

}  // namespace topolm::kernels
