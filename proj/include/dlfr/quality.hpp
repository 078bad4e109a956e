#pragma once

#include "dlfr/video.hpp"

#include <limits>

namespace dlfr {

/// Gaussian-window single-scale SSIM parameters (11x11, sigma 1.5,
/// K1 = 0.01, K2 = 0.03, L = 255). Only windows fully inside the frame count.
struct SsimParams {
    static constexpr std::size_t window = 11;
    static constexpr double sigma = 1.5;
    static constexpr double dynamic_range = 255.0;
    static constexpr double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
    static constexpr double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
};

/// PSNR of identical inputs.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

struct QualityScore {
    double ssim = 1.0;
    double psnr = kInfinitePsnr;  // +inf when the mean squared error is zero
};

/// Normalized 1-D Gaussian taps used (separably) for the SSIM window.
std::vector<double> ssim_window_taps();

/// Mean local SSIM. Symmetric in its arguments. Requires equal shapes and a
/// minimum dimension of 11.
double ssim(const Frame& a, const Frame& b);

double mean_squared_error(const Frame& a, const Frame& b);

/// 10*log10(255^2/MSE), or kInfinitePsnr for MSE == 0.
double psnr(const Frame& a, const Frame& b);
double psnr_from_mse(double mse);

/// Per-frame SSIM averaged arithmetically; PSNR from the MSE pooled over
/// every frame.
QualityScore clip_quality(const Clip& ref, const Clip& rec);

}  // namespace dlfr
