#include "dlfr/kernels.hpp"
#include "dlfr/error.hpp"
#include "kernel_table.hpp"

#include <atomic>

namespace dlfr::kernels {
namespace {

// -1 means "no override".
std::atomic<int> g_override{-1};

bool cpu_has_avx2() noexcept {
#if defined(DLFR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const detail::KernelTable& table_for(Level level) noexcept {
#if defined(DLFR_HAVE_AVX2)
    if (level == Level::avx2) return detail::avx2_table();
#endif
    (void)level;
    return detail::scalar_table();
}

const detail::KernelTable& active_table() noexcept {
    return table_for(active_level());
}

}  // namespace

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::scalar: return "scalar";
        case Level::avx2: return "avx2";
    }
    return "unknown";
}

bool level_available(Level level) noexcept {
    static const bool avx2 = cpu_has_avx2();
    return level == Level::scalar || (level == Level::avx2 && avx2);
}

Level detected_level() noexcept {
    return level_available(Level::avx2) ? Level::avx2 : Level::scalar;
}

Level active_level() noexcept {
    const int forced = g_override.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<Level>(forced);
    return detected_level();
}

void set_level_override(std::optional<Level> level) noexcept {
    if (!level) {
        g_override.store(-1, std::memory_order_relaxed);
        return;
    }
    const Level chosen = level_available(*level) ? *level : Level::scalar;
    g_override.store(static_cast<int>(chosen), std::memory_order_relaxed);
}

ScopedLevel::ScopedLevel(Level level) {
    const int forced = g_override.load(std::memory_order_relaxed);
    if (forced >= 0) previous_ = static_cast<Level>(forced);
    set_level_override(level);
}

ScopedLevel::~ScopedLevel() { set_level_override(previous_); }

double dot(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorKind::dimension, "dot: size mismatch");
    return active_table().dot(x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorKind::dimension,
            "squared_distance: size mismatch");
    return active_table().squared_distance(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    require(x.size() == y.size(), ErrorKind::dimension, "axpy: size mismatch");
    active_table().axpy(a, x.data(), y.data(), x.size());
}

void correlate_valid(std::span<const double> src, std::span<const double> taps,
                     std::span<double> dst) {
    require(!taps.empty() && taps.size() <= src.size(), ErrorKind::dimension,
            "correlate_valid: taps longer than source");
    require(dst.size() == src.size() - taps.size() + 1, ErrorKind::dimension,
            "correlate_valid: wrong output size");
    active_table().correlate_valid(src.data(), src.size(), taps.data(),
                                   taps.size(), dst.data());
}

double ssim_sum(const MomentMaps& m, double c1, double c2) {
    const std::size_t n = m.mean_a.size();
    require(m.mean_b.size() == n && m.sq_a.size() == n && m.sq_b.size() == n &&
                m.cross.size() == n,
            ErrorKind::dimension, "ssim_sum: map size mismatch");
    return active_table().ssim_sum(m.mean_a.data(), m.mean_b.data(),
                                   m.sq_a.data(), m.sq_b.data(),
                                   m.cross.data(), n, c1, c2);
}

}  // namespace dlfr::kernels
