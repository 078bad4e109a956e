#pragma once

// Data-parallel inner loops shared by the metric, spectrum and codec code.
//
// Every kernel has a portable scalar reference and, where the build target
// allows it, an AVX2 variant. The variant is chosen once at first use from
// the CPU's reported features; tests can pin a level with ScopedLevel to
// check that both paths agree.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace dlfr::kernels {

enum class Level { scalar, avx2 };

std::string_view to_string(Level level) noexcept;

/// Highest level both compiled in and supported by the running CPU.
Level detected_level() noexcept;

/// Level currently used by the dispatching entry points below.
Level active_level() noexcept;

/// True if `level` can run on this machine.
bool level_available(Level level) noexcept;

/// Forces a level (or clears the override with nullopt). Requests for an
/// unavailable level fall back to scalar.
void set_level_override(std::optional<Level> level) noexcept;

class ScopedLevel {
public:
    explicit ScopedLevel(Level level);
    ~ScopedLevel();
    ScopedLevel(const ScopedLevel&) = delete;
    ScopedLevel& operator=(const ScopedLevel&) = delete;

private:
    std::optional<Level> previous_;
};

// Sum of x[i]*y[i]. Sizes must match.
double dot(std::span<const double> x, std::span<const double> y);

// Sum of (x[i]-y[i])^2. Sizes must match.
double squared_distance(std::span<const double> x, std::span<const double> y);

// y[i] += a*x[i].
void axpy(double a, std::span<const double> x, std::span<double> y);

// Valid-mode correlation: dst[i] = sum_k taps[k]*src[i+k],
// dst.size() == src.size() - taps.size() + 1.
void correlate_valid(std::span<const double> src, std::span<const double> taps,
                     std::span<double> dst);

// Sum over i of the local SSIM value built from windowed first and second
// moments:
//   ((2*ma*mb + c1) * (2*(eab - ma*mb) + c2)) /
//   ((ma^2 + mb^2 + c1) * ((eaa - ma^2) + (ebb - mb^2) + c2))
struct MomentMaps {
    std::span<const double> mean_a, mean_b, sq_a, sq_b, cross;
};
double ssim_sum(const MomentMaps& m, double c1, double c2);

// Reference implementations, always available. Exposed for equivalence
// testing against the dispatched versions.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void correlate_valid(const double* src, std::size_t n, const double* taps,
                     std::size_t k, double* dst);
double ssim_sum(const double* ma, const double* mb, const double* saa,
                const double* sbb, const double* sab, std::size_t n,
                double c1, double c2);
}  // namespace scalar

}  // namespace dlfr::kernels
