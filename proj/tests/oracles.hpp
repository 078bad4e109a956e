#pragma once

// Direct, unoptimized reference computations used as test oracles. None of
// them shares code with the library beyond the Frame container.

#include "dlfr/error.hpp"
#include "dlfr/video.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace oracle {

/// Full 2-D Gaussian window evaluated at every valid position.
double ssim(const dlfr::Frame& a, const dlfr::Frame& b);

/// |DFT| via std::complex, one-sided amplitude scaling.
std::vector<double> dft_amplitudes(std::span<const double> x);

/// Mean over adjacent pairs of 1 - oracle::ssim.
double complexity(std::span<const dlfr::Frame> frames);

/// Spearman rank correlation (no ties expected).
double spearman(std::span<const double> a, std::span<const double> b);

dlfr::Frame random_frame(std::mt19937_64& rng, std::size_t w, std::size_t h);
std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                  double hi = 1.0);

/// Kind of the dlfr::Error thrown by `f`, or nullopt when it returns.
template <class F>
std::optional<dlfr::ErrorKind> thrown_kind(F&& f) {
    try {
        f();
    } catch (const dlfr::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

}  // namespace oracle
