#pragma once

// Two-term per-step cost model: cost(T) = alpha (T/T_b)^2 + (1 - alpha) T/T_b.

#include "dlfr/scheduler.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dlfr {

struct CostEstimate {
    std::size_t tokens_base = 0;
    std::size_t tokens_dlfr = 0;
    double quad_fraction = 1.0;
    double speedup = 1.0;
};

/// Sum over segments of latent steps times spatial tokens per step.
std::size_t token_count(const RateSchedule& sched, std::size_t spatial_tokens_per_frame);

double estimate_speedup(double tokens_base, double tokens_dlfr, double quad_fraction);
CostEstimate estimate_cost(std::size_t tokens_base, std::size_t tokens_dlfr,
                           double quad_fraction);

struct SpeedupObservation {
    double token_ratio = 1.0;  // tokens_dlfr / tokens_base
    double speedup = 1.0;
};

/// Least-squares alpha in [0, 1].
double calibrate_quad_fraction(std::span<const SpeedupObservation> observed);

/// Largest |predicted - observed| speedup at `alpha`.
double max_abs_residual(std::span<const SpeedupObservation> observed, double alpha);

}  // namespace dlfr
