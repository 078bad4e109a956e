#include "dlfr/quality.hpp"

#include "dlfr/error.hpp"
#include "dlfr/kernels.hpp"

#include <cmath>

namespace dlfr {
namespace {

void check_shapes(const Frame& a, const Frame& b) {
    require(a.same_shape(b), ErrorKind::dimension, "frames differ in size");
}

// Separable valid-mode Gaussian filter of `plane` (width x height).
// Output is (width-k+1) x (height-k+1).
std::vector<double> blur_valid(std::span<const double> plane, std::size_t width,
                               std::size_t height, std::span<const double> taps) {
    const std::size_t k = taps.size();
    const std::size_t ow = width - k + 1;
    const std::size_t oh = height - k + 1;

    std::vector<double> horiz(ow * height);
    for (std::size_t y = 0; y < height; ++y) {
        kernels::correlate_valid(plane.subspan(y * width, width), taps,
                                 std::span<double>(horiz).subspan(y * ow, ow));
    }
    std::vector<double> out(ow * oh, 0.0);
    for (std::size_t y = 0; y < oh; ++y) {
        std::span<double> dst(out.data() + y * ow, ow);
        for (std::size_t j = 0; j < k; ++j) {
            kernels::axpy(taps[j], std::span<const double>(horiz).subspan((y + j) * ow, ow), dst);
        }
    }
    return out;
}

}  // namespace

std::vector<double> ssim_window_taps() {
    constexpr std::size_t k = SsimParams::window;
    std::vector<double> taps(k);
    const double half = static_cast<double>(k / 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = static_cast<double>(i) - half;
        taps[i] = std::exp(-(d * d) / (2.0 * SsimParams::sigma * SsimParams::sigma));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

double ssim(const Frame& a, const Frame& b) {
    check_shapes(a, b);
    constexpr std::size_t k = SsimParams::window;
    require(a.width() >= k && a.height() >= k, ErrorKind::dimension,
            "frame smaller than the 11x11 SSIM window");

    static const std::vector<double> taps = ssim_window_taps();
    const std::size_t w = a.width();
    const std::size_t h = a.height();

    std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
    const auto la = a.luma();
    const auto lb = b.luma();
    for (std::size_t i = 0; i < a.size(); ++i) {
        aa[i] = la[i] * la[i];
        bb[i] = lb[i] * lb[i];
        ab[i] = la[i] * lb[i];
    }

    const auto mu_a = blur_valid(la, w, h, taps);
    const auto mu_b = blur_valid(lb, w, h, taps);
    const auto e_aa = blur_valid(aa, w, h, taps);
    const auto e_bb = blur_valid(bb, w, h, taps);
    const auto e_ab = blur_valid(ab, w, h, taps);

    const double total = kernels::ssim_sum({mu_a, mu_b, e_aa, e_bb, e_ab},
                                           SsimParams::c1, SsimParams::c2);
    return total / static_cast<double>(mu_a.size());
}

double mean_squared_error(const Frame& a, const Frame& b) {
    check_shapes(a, b);
    return kernels::squared_distance(a.luma(), b.luma()) / static_cast<double>(a.size());
}

double psnr_from_mse(double mse) {
    if (mse <= 0.0) return kInfinitePsnr;
    const double peak = SsimParams::dynamic_range;
    return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const Frame& a, const Frame& b) { return psnr_from_mse(mean_squared_error(a, b)); }

QualityScore clip_quality(const Clip& ref, const Clip& rec) {
    require(ref.size() == rec.size(), ErrorKind::dimension, "clips differ in frame count");
    require(!ref.empty(), ErrorKind::parameter, "cannot score empty clips");

    double ssim_total = 0.0;
    double sq_err = 0.0;
    std::size_t samples = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ssim_total += ssim(ref[i], rec[i]);
        sq_err += kernels::squared_distance(ref[i].luma(), rec[i].luma());
        samples += ref[i].size();
    }
    return {ssim_total / static_cast<double>(ref.size()),
            psnr_from_mse(sq_err / static_cast<double>(samples))};
}

}  // namespace dlfr
