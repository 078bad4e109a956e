#include "dlfr/error.hpp"
#include "dlfr/kernels.hpp"
#include "dlfr/quality.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dlfr;

namespace {

Frame ramp(std::size_t w, std::size_t h, int a, int b, int c) {
    std::vector<double> v(w * h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) v[y * w + x] = double((int(x) * a + int(y) * b + c) % 256);
    return Frame(w, h, std::move(v));
}

}  // namespace

TEST_CASE("window taps are a normalized symmetric Gaussian") {
    const auto g = ssim_window_taps();
    REQUIRE(g.size() == 11);
    double s = 0;
    for (double v : g) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i < 5; ++i) CHECK(g[i] == doctest::Approx(g[10 - i]).epsilon(1e-15));
    CHECK(g[5] / g[4] == doctest::Approx(std::exp(1.0 / 4.5)));
}

TEST_CASE("ssim matches frozen oracle values") {
    // Values computed independently with a direct 2-D window in numpy.
    const Frame p = ramp(40, 24, 7, 13, 0), q = ramp(40, 24, 5, 11, 17);
    CHECK(ssim(p, q) == doctest::Approx(0.23333121379135896).epsilon(1e-12));
    CHECK(ssim(q, p) == doctest::Approx(0.23333121379135902).epsilon(1e-12));

    const Clip c = synth_translate(Pattern::checker, 1, 24, 2, 32, 32, 8);
    CHECK(ssim(c[0], c[1]) == doctest::Approx(0.64285816192632694).epsilon(1e-12));
}

TEST_CASE("ssim matches the direct oracle on random frames") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 6; ++i) {
        const std::size_t w = 11 + rng() % 20, h = 11 + rng() % 14;
        const Frame a = oracle::random_frame(rng, w, h), b = oracle::random_frame(rng, w, h);
        const double want = oracle::ssim(a, b);
        for (auto l : {kernels::Level::scalar, kernels::Level::avx2}) {
            if (!kernels::level_available(l)) continue;
            kernels::ScopedLevel pin(l);
            CHECK(ssim(a, b) == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("ssim properties") {
    std::mt19937_64 rng(4);
    const Frame a = oracle::random_frame(rng, 24, 20), b = oracle::random_frame(rng, 24, 20);
    CHECK(ssim(a, a) == 1.0);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
    CHECK(ssim(a, b) <= 1.0);
    CHECK(ssim(a, b) >= -1.0);

    const double c1 = SsimParams::c1;
    const double want = c1 / (255.0 * 255.0 + c1);
    CHECK(ssim(Frame::filled(16, 16, 0), Frame::filled(16, 16, 255)) ==
          doctest::Approx(want).epsilon(1e-12));
    CHECK(want == doctest::Approx(1.0001e-4).epsilon(1e-3));
}

TEST_CASE("ssim input checks") {
    CHECK_THROWS_AS(ssim(Frame::filled(12, 12, 0), Frame::filled(12, 13, 0)), Error);
    CHECK_THROWS_AS(ssim(Frame::filled(10, 12, 0), Frame::filled(10, 12, 0)), Error);
}

TEST_CASE("psnr and mse") {
    const Frame p = ramp(40, 24, 7, 13, 0), q = ramp(40, 24, 5, 11, 17);
    CHECK(mean_squared_error(p, q) == doctest::Approx(9437.666666666666).epsilon(1e-12));
    CHECK(psnr(p, q) == doctest::Approx(8.382157266386637).epsilon(1e-12));
    CHECK(psnr(p, p) == kInfinitePsnr);
    CHECK(psnr(Frame::filled(2, 2, 0), Frame::filled(2, 2, 255)) == doctest::Approx(0.0));
    CHECK(psnr_from_mse(65025.0 / 100.0) == doctest::Approx(20.0));
}

TEST_CASE("clip quality pools frames") {
    const Frame a = ramp(16, 16, 3, 5, 0), b = ramp(16, 16, 3, 5, 9);
    const Clip ref(10, {a, a}), rec(10, {a, b});
    const auto q = clip_quality(ref, rec);
    CHECK(q.ssim == doctest::Approx((1.0 + ssim(a, b)) / 2));
    CHECK(q.psnr == doctest::Approx(psnr_from_mse(mean_squared_error(a, b) / 2)));
    const auto same = clip_quality(ref, ref);
    CHECK(same.ssim == 1.0);
    CHECK(same.psnr == kInfinitePsnr);
    CHECK_THROWS_AS(clip_quality(ref, Clip(10, {a})), Error);
}
