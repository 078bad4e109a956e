#pragma once

#include <cstddef>

namespace dlfr::kernels::detail {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*correlate_valid)(const double*, std::size_t, const double*,
                            std::size_t, double*);
    double (*ssim_sum)(const double*, const double*, const double*,
                       const double*, const double*, std::size_t, double,
                       double);
};

const KernelTable& scalar_table() noexcept;

#if defined(DLFR_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace dlfr::kernels::detail
