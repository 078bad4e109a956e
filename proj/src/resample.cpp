#include "dlfr/resample.hpp"

#include "dlfr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dlfr {
namespace {

std::size_t integer_factor(double hi, double lo, const char* what) {
    require(hi > 0.0 && lo > 0.0, ErrorKind::parameter, std::string(what) + ": rates must be positive");
    const double r = hi / lo;
    const double k = std::round(r);
    require(k >= 1.0 && std::abs(r - k) <= 1e-9 * k, ErrorKind::parameter,
            std::string(what) + ": rates are not related by an integer factor");
    return static_cast<std::size_t>(k);
}

// a + frac*(b - a).
void lerp_into(std::span<double> dst, std::span<const double> a, std::span<const double> b,
               double frac) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] + frac * (b[i] - a[i]);
}

}  // namespace

FeatureVolume to_features(std::span<const Frame> frames) {
    require(!frames.empty(), ErrorKind::parameter, "no frames to convert");
    FeatureVolume vol(frames.size(), 1, frames[0].height(), frames[0].width());
    for (std::size_t t = 0; t < frames.size(); ++t) {
        require(frames[t].same_shape(frames[0]), ErrorKind::dimension, "frames differ in size");
        std::copy(frames[t].luma().begin(), frames[t].luma().end(), vol.step(t).begin());
    }
    return vol;
}

std::vector<Frame> to_frames(const FeatureVolume& vol) {
    require(vol.channels == 1, ErrorKind::dimension, "frames need a single-channel volume");
    std::vector<Frame> frames;
    frames.reserve(vol.steps);
    for (std::size_t t = 0; t < vol.steps; ++t) {
        auto s = vol.step(t);
        std::vector<double> luma(s.begin(), s.end());
        for (double& v : luma) v = std::clamp(v, 0.0, 255.0);
        frames.emplace_back(vol.width, vol.height, std::move(luma));
    }
    return frames;
}

DownMethod parse_down_method(std::string_view name) {
    if (name == "drop") return DownMethod::drop;
    if (name == "average") return DownMethod::average;
    if (name == "linear") return DownMethod::linear;
    fail(ErrorKind::config, "unknown downsample method '" + std::string(name) + "'");
}

UpMethod parse_up_method(std::string_view name) {
    if (name == "nearest") return UpMethod::nearest;
    if (name == "linear") return UpMethod::linear;
    fail(ErrorKind::config, "unknown upsample method '" + std::string(name) + "'");
}

std::string_view to_string(DownMethod m) noexcept {
    switch (m) {
        case DownMethod::drop: return "drop";
        case DownMethod::average: return "average";
        case DownMethod::linear: return "linear";
    }
    return "?";
}

std::string_view to_string(UpMethod m) noexcept {
    switch (m) {
        case UpMethod::nearest: return "nearest";
        case UpMethod::linear: return "linear";
    }
    return "?";
}

FeatureVolume downsample_by(const FeatureVolume& in, std::size_t stride, DownMethod method) {
    require(stride >= 1, ErrorKind::parameter, "stride must be >= 1");
    if (stride == 1) return in;
    const std::size_t out_steps = (in.steps + stride - 1) / stride;
    FeatureVolume out(out_steps, in.channels, in.height, in.width);
    for (std::size_t j = 0; j < out_steps; ++j) {
        const std::size_t begin = j * stride;
        switch (method) {
            case DownMethod::drop: {
                auto src = in.step(begin);
                std::copy(src.begin(), src.end(), out.step(j).begin());
                break;
            }
            case DownMethod::average: {
                // Mean of offsets from the first step of the block.
                const std::size_t end = std::min(in.steps, begin + stride);
                const double n = static_cast<double>(end - begin);
                auto first = in.step(begin);
                auto dst = out.step(j);
                for (std::size_t i = 0; i < dst.size(); ++i) {
                    double acc = 0.0;
                    for (std::size_t t = begin + 1; t < end; ++t) acc += in.step(t)[i] - first[i];
                    dst[i] = first[i] + acc / n;
                }
                break;
            }
            case DownMethod::linear: {
                const double last = static_cast<double>(in.steps - 1);
                const double pos = std::min(
                    last, static_cast<double>(begin) + static_cast<double>(stride - 1) / 2.0);
                const auto lo = static_cast<std::size_t>(std::floor(pos));
                const std::size_t hi = std::min(lo + 1, in.steps - 1);
                lerp_into(out.step(j), in.step(lo), in.step(hi), pos - static_cast<double>(lo));
                break;
            }
        }
    }
    return out;
}

FeatureVolume upsample_by(const FeatureVolume& in, std::size_t factor, UpMethod method) {
    require(factor >= 1, ErrorKind::parameter, "upsampling factor must be >= 1");
    if (factor == 1) return in;
    FeatureVolume out(in.steps * factor, in.channels, in.height, in.width);
    for (std::size_t t = 0; t < out.steps; ++t) {
        const std::size_t lo = t / factor;
        const std::size_t rem = t % factor;
        if (method == UpMethod::nearest || rem == 0 || lo + 1 >= in.steps) {
            auto src = in.step(lo);
            std::copy(src.begin(), src.end(), out.step(t).begin());
        } else {
            const double frac = static_cast<double>(rem) / static_cast<double>(factor);
            lerp_into(out.step(t), in.step(lo), in.step(lo + 1), frac);
        }
    }
    return out;
}

FeatureVolume downsample(const FeatureVolume& in, double source_rate, double target_rate,
                         DownMethod method) {
    return downsample_by(in, integer_factor(source_rate, target_rate, "downsample"), method);
}

FeatureVolume upsample(const FeatureVolume& in, double source_rate, double target_rate,
                       UpMethod method) {
    return upsample_by(in, integer_factor(target_rate, source_rate, "upsample"), method);
}

}  // namespace dlfr
