// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; selection happens at runtime so the rest of
// the binary stays baseline.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "topolm/kernels.hpp"

namespace topolm::kernels {
namespace {

inline double hsum256(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    __m128d h = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, h));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum256(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double dist2_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = hsum256(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

void spmv_csr_avx2(std::size_t rows, const std::int64_t* row_ptr,
                   const std::int32_t* cols, const double* vals,
                   const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const std::int64_t begin = row_ptr[r];
        const std::int64_t end = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        std::int64_t k = begin;
        for (; k + 4 <= end; k += 4) {
            __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
            __m256d vx = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), vx, acc);
        }
        double s = hsum256(acc);
        for (; k < end; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

}  // namespace

const Backend& avx2_backend() {
    static const Backend b{"avx2",     dot_avx2,   axpy_avx2,
                           axpby_avx2, scal_avx2, dist2_avx2,
                           spmv_csr_avx2};
    return b;
}

}  // namespace topolm::kernels

#endif  // x86-64
