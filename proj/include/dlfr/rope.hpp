#pragma once

// Rotary position embeddings on the temporal axis, with positions taken as
// cumulative token start times so longer-lived latent tokens sit further
// apart.

#include <cstddef>
#include <span>
#include <vector>

namespace dlfr {

/// theta_i = 10000^(-2i/D), i = 0 .. D/2-1.
std::vector<double> rope_theta(std::size_t dim);

/// P_0 = 0, P_m = sum of durations[0..m).
std::vector<double> positions_from_durations(std::span<const double> durations);

/// Rotates each pair (v[2i], v[2i+1]) by angle p * theta_i.
std::vector<double> rope_rotate(std::span<const double> v, double position);

/// (R(p_m) q) . (R(p_n) k).
double attention_score(std::span<const double> q, std::span<const double> k, double p_m,
                       double p_n);

struct RopeTable {
    std::size_t dim = 0;
    std::vector<double> positions;
    std::vector<double> theta;
    std::vector<double> cos;  // positions.size() x dim/2, row-major
    std::vector<double> sin;

    std::size_t rows() const noexcept { return positions.size(); }
    std::size_t half() const noexcept { return dim / 2; }
    double cos_at(std::size_t m, std::size_t i) const { return cos[m * half() + i]; }
    double sin_at(std::size_t m, std::size_t i) const { return sin[m * half() + i]; }

    /// Rotates `v` with row m of the table.
    std::vector<double> rotate(std::span<const double> v, std::size_t m) const;
};

RopeTable rope_table_at(std::span<const double> positions, std::size_t dim);
RopeTable rope_table(std::span<const double> durations, std::size_t dim);

/// Table at positions 0, 1, ..., tokens-1.
RopeTable standard_rope_table(std::size_t tokens, std::size_t dim);

/// Per-token durations, in source frames, of every latent step of a
/// schedule-like list of (frames, down_ratio) pairs. The last step of a
/// segment covers only the frames left over.
std::vector<double> token_durations(std::span<const std::size_t> segment_frames,
                                    std::span<const std::size_t> down_ratios);

}  // namespace dlfr
