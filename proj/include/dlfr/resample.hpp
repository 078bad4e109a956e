#pragma once

#include "dlfr/video.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dlfr {

/// Dense steps x channels x height x width feature tensor.
struct FeatureVolume {
    std::size_t steps = 0;
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> data;

    FeatureVolume() = default;
    FeatureVolume(std::size_t t, std::size_t c, std::size_t h, std::size_t w)
        : steps(t), channels(c), height(h), width(w), data(t * c * h * w, 0.0) {}

    std::size_t step_size() const noexcept { return channels * height * width; }
    std::span<double> step(std::size_t t) { return {data.data() + t * step_size(), step_size()}; }
    std::span<const double> step(std::size_t t) const {
        return {data.data() + t * step_size(), step_size()};
    }

    friend bool operator==(const FeatureVolume&, const FeatureVolume&) = default;
};

/// Single-channel volume holding the frames' luma.
FeatureVolume to_features(std::span<const Frame> frames);

/// One-channel volume back to frames, clamped to [0, 255].
std::vector<Frame> to_frames(const FeatureVolume& vol);

enum class DownMethod { drop, average, linear };
enum class UpMethod { nearest, linear };

DownMethod parse_down_method(std::string_view name);
UpMethod parse_up_method(std::string_view name);
std::string_view to_string(DownMethod m) noexcept;
std::string_view to_string(UpMethod m) noexcept;

/// Temporal decimation by an integer stride; output has ceil(steps/stride)
/// steps.
///   drop    - keeps steps 0, s, 2s, ...
///   average - mean of each consecutive s-block (the last block may be short)
///   linear  - linear interpolation at each block centre j*s + (s-1)/2,
///             clamped to the last step
FeatureVolume downsample_by(const FeatureVolume& in, std::size_t stride, DownMethod method);

/// Temporal interpolation by an integer factor; output has steps*factor steps.
///   nearest - each step repeated `factor` times
///   linear  - piecewise linear between steps, last step held
FeatureVolume upsample_by(const FeatureVolume& in, std::size_t factor, UpMethod method);

/// Rate-based forms; the rates must be related by an integer factor.
FeatureVolume downsample(const FeatureVolume& in, double source_rate, double target_rate,
                         DownMethod method);
FeatureVolume upsample(const FeatureVolume& in, double source_rate, double target_rate,
                       UpMethod method);

}  // namespace dlfr
