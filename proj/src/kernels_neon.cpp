// SPDX-License-Identifier: Apache-2.0
#if defined(__aarch64__)

#include <arm_neon.h>

#include "topolm/kernels.hpp"

namespace topolm::kernels {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_neon(double a, const double* x, double b, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vmulq_f64(vb, vld1q_f64(y + i));
        vst1q_f64(y + i, vfmaq_f64(vy, va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scal_neon(double a, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double dist2_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

void spmv_csr_neon(std::size_t rows, const std::int64_t* row_ptr,
                   const std::int32_t* cols, const double* vals,
                   const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const std::int64_t begin = row_ptr[r];
        const std::int64_t end = row_ptr[r + 1];
        float64x2_t acc = vdupq_n_f64(0.0);
        std::int64_t k = begin;
        for (; k + 2 <= end; k += 2) {
            // no gather on NEON; assemble the pair manually
            float64x2_t vx = {x[cols[k]], x[cols[k + 1]]};
            acc = vfmaq_f64(acc, vld1q_f64(vals + k), vx);
        }
        double s = vaddvq_f64(acc);
        for (; k < end; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

}  // namespace

const Backend& neon_backend() {
    static const Backend b{"neon",     dot_neon,   axpy_neon,
                           axpby_neon, scal_neon, dist2_neon,
                           spmv_csr_neon};
    return b;
}

}  // namespace topolm::kernels

#endif  // aarch64
