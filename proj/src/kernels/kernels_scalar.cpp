#include "dlfr/kernels.hpp"
#include "kernel_table.hpp"

namespace dlfr::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void correlate_valid(const double* src, std::size_t n, const double* taps,
                     std::size_t k, double* dst) {
    const std::size_t out = n - k + 1;
    for (std::size_t i = 0; i < out; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += taps[j] * src[i + j];
        dst[i] = acc;
    }
}

double ssim_sum(const double* ma, const double* mb, const double* saa,
                const double* sbb, const double* sab, std::size_t n,
                double c1, double c2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = ma[i];
        const double b = mb[i];
        const double ab = a * b;
        const double aa = a * a;
        const double bb = b * b;
        const double var_a = saa[i] - aa;
        const double var_b = sbb[i] - bb;
        const double cov = sab[i] - ab;
        const double num = (2.0 * ab + c1) * (2.0 * cov + c2);
        const double den = (aa + bb + c1) * (var_a + var_b + c2);
        acc += num / den;
    }
    return acc;
}

}  // namespace dlfr::kernels::scalar

namespace dlfr::kernels::detail {

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{
        &scalar::dot,
        &scalar::squared_distance,
        &scalar::axpy,
        &scalar::correlate_valid,
        &scalar::ssim_sum,
    };
    return table;
}

}  // namespace dlfr::kernels::detail
