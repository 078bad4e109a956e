#include "dlfr/cost_model.hpp"

#include "dlfr/error.hpp"

#include <algorithm>
#include <cmath>

namespace dlfr {
namespace {

double predicted(double ratio, double alpha) {
    return 1.0 / (alpha * ratio * ratio + (1.0 - alpha) * ratio);
}

double sse(std::span<const SpeedupObservation> obs, double alpha) {
    double s = 0.0;
    for (const auto& o : obs) {
        const double e = predicted(o.token_ratio, alpha) - o.speedup;
        s += e * e;
    }
    return s;
}

}  // namespace

std::size_t token_count(const RateSchedule& sched, std::size_t spatial_tokens_per_frame) {
    return sched.latent_steps() * spatial_tokens_per_frame;
}

double estimate_speedup(double tokens_base, double tokens_dlfr, double quad_fraction) {
    require(tokens_base > 0.0 && tokens_dlfr > 0.0, ErrorKind::parameter,
            "token counts must be positive");
    require(quad_fraction >= 0.0 && quad_fraction <= 1.0, ErrorKind::parameter,
            "quadratic fraction must lie in [0, 1]");
    return predicted(tokens_dlfr / tokens_base, quad_fraction);
}

CostEstimate estimate_cost(std::size_t tokens_base, std::size_t tokens_dlfr,
                           double quad_fraction) {
    return {tokens_base, tokens_dlfr, quad_fraction,
            estimate_speedup(static_cast<double>(tokens_base), static_cast<double>(tokens_dlfr),
                             quad_fraction)};
}

double calibrate_quad_fraction(std::span<const SpeedupObservation> observed) {
    bool informative = false;
    for (const auto& o : observed) {
        require(std::isfinite(o.token_ratio) && o.token_ratio > 0.0 && std::isfinite(o.speedup) &&
                    o.speedup > 0.0,
                ErrorKind::parameter, "observations need positive ratios and speedups");
        informative = informative || o.token_ratio != 1.0;
    }
    require(informative, ErrorKind::parameter,
            "calibration needs at least one observation with token ratio != 1");

    constexpr int kGrid = 1000;
    int best = 0;
    double best_err = sse(observed, 0.0);
    for (int i = 1; i <= kGrid; ++i) {
        const double e = sse(observed, static_cast<double>(i) / kGrid);
        if (e < best_err) {
            best_err = e;
            best = i;
        }
    }
    double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
    double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    double fa = sse(observed, a), fb = sse(observed, b);
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = sse(observed, a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = sse(observed, b);
        }
    }
    double alpha = 0.5 * (lo + hi);
    for (double edge : {0.0, 1.0})
        if (sse(observed, edge) <= sse(observed, alpha)) alpha = edge;
    return std::clamp(alpha, 0.0, 1.0);
}

double max_abs_residual(std::span<const SpeedupObservation> observed, double alpha) {
    double m = 0.0;
    for (const auto& o : observed)
        m = std::max(m, std::abs(estimate_speedup(1.0, o.token_ratio, alpha) - o.speedup));
    return m;
}

}  // namespace dlfr
