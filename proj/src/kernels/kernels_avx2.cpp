// Compiled with -mavx2 -mfma -ffp-contract=off. Only reached through the
// dispatch table after the CPU has reported AVX2 and FMA support.

#include "kernel_table.hpp"

#include <immintrin.h>

namespace dlfr::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                               _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        total += d * d;
    }
    return total;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void correlate_valid(const double* src, std::size_t n, const double* taps,
                     std::size_t k, double* dst) {
    const std::size_t out = n - k + 1;
    std::size_t i = 0;
    for (; i + 4 <= out; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < k; ++j)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(taps[j]),
                                  _mm256_loadu_pd(src + i + j), acc);
        _mm256_storeu_pd(dst + i, acc);
    }
    for (; i < out; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += taps[j] * src[i + j];
        dst[i] = acc;
    }
}

// Same operation order as the scalar version, no fused multiply-adds.
double ssim_sum(const double* ma, const double* mb, const double* saa,
                const double* sbb, const double* sab, std::size_t n,
                double c1, double c2) {
    const __m256d vc1 = _mm256_set1_pd(c1);
    const __m256d vc2 = _mm256_set1_pd(c2);
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(ma + i);
        const __m256d b = _mm256_loadu_pd(mb + i);
        const __m256d ab = _mm256_mul_pd(a, b);
        const __m256d aa = _mm256_mul_pd(a, a);
        const __m256d bb = _mm256_mul_pd(b, b);
        const __m256d var_a = _mm256_sub_pd(_mm256_loadu_pd(saa + i), aa);
        const __m256d var_b = _mm256_sub_pd(_mm256_loadu_pd(sbb + i), bb);
        const __m256d cov = _mm256_sub_pd(_mm256_loadu_pd(sab + i), ab);
        const __m256d num =
            _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(two, ab), vc1),
                          _mm256_add_pd(_mm256_mul_pd(two, cov), vc2));
        const __m256d den =
            _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(aa, bb), vc1),
                          _mm256_add_pd(_mm256_add_pd(var_a, var_b), vc2));
        acc = _mm256_add_pd(acc, _mm256_div_pd(num, den));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double a = ma[i];
        const double b = mb[i];
        const double ab = a * b;
        const double aa = a * a;
        const double bb = b * b;
        const double num = (2.0 * ab + c1) * (2.0 * (sab[i] - ab) + c2);
        const double den = (aa + bb + c1) * ((saa[i] - aa) + (sbb[i] - bb) + c2);
        total += num / den;
    }
    return total;
}

}  // namespace
}  // namespace dlfr::kernels::avx2

namespace dlfr::kernels::detail {

const KernelTable& avx2_table() noexcept {
    static const KernelTable table{
        &avx2::dot,
        &avx2::squared_distance,
        &avx2::axpy,
        &avx2::correlate_valid,
        &avx2::ssim_sum,
    };
    return table;
}

}  // namespace dlfr::kernels::detail
