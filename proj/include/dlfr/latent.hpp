#pragma once

#include <cstddef>
#include <vector>

namespace dlfr {

/// Latent code of one segment: steps x channels x height x width, 32-bit reals.
struct LatentSegment {
    std::size_t index = 0;
    float latent_rate = 0.0f;
    std::size_t steps = 0;
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<float> data;

    std::size_t plane_size() const noexcept { return height * width; }
    std::size_t step_size() const noexcept { return channels * height * width; }
    float at(std::size_t t, std::size_t c, std::size_t y, std::size_t x) const {
        return data[((t * channels + c) * height + y) * width + x];
    }

    friend bool operator==(const LatentSegment&, const LatentSegment&) = default;
};

}  // namespace dlfr
