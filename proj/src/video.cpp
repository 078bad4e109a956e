#include "dlfr/video.hpp"

#include "dlfr/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dlfr {

Frame::Frame(std::size_t width, std::size_t height, std::vector<double> luma)
    : width_(width), height_(height), luma_(std::move(luma)) {
    require(width >= 1 && height >= 1, ErrorKind::dimension,
            "frame dimensions must be at least 1x1");
    require(luma_.size() == width * height, ErrorKind::dimension,
            "frame sample count " + std::to_string(luma_.size()) +
                " does not match " + std::to_string(width) + "x" +
                std::to_string(height));
    for (double v : luma_) {
        if (!(std::isfinite(v) && v >= 0.0 && v <= 255.0))
            fail(ErrorKind::parameter, "luma sample out of [0, 255]: " + std::to_string(v));
    }
}

Frame Frame::filled(std::size_t width, std::size_t height, double value) {
    return Frame(width, height, std::vector<double>(width * height, value));
}

Clip::Clip(double fps, std::vector<Frame> frames) : fps_(fps), frames_(std::move(frames)) {
    require(std::isfinite(fps) && fps > 0.0, ErrorKind::parameter,
            "fps must be positive");
    for (const Frame& f : frames_) {
        require(f.same_shape(frames_.front()), ErrorKind::dimension,
                "clip frames differ in size");
    }
}

std::size_t Clip::width() const noexcept { return frames_.empty() ? 0 : frames_[0].width(); }
std::size_t Clip::height() const noexcept { return frames_.empty() ? 0 : frames_[0].height(); }

std::size_t default_segment_length(double fps) {
    const auto n = static_cast<std::size_t>(std::lround(fps));
    return n < 2 ? 2 : n;
}

std::vector<Segment> segment_clip(const Clip& clip, std::size_t segment_len) {
    require(segment_len >= 2, ErrorKind::parameter, "segment length must be >= 2");
    require(!clip.empty(), ErrorKind::parameter, "cannot segment an empty clip");

    std::vector<Segment> out;
    const auto& frames = clip.frames();
    for (std::size_t start = 0, i = 0; start < frames.size(); start += segment_len, ++i) {
        const std::size_t stop = std::min(frames.size(), start + segment_len);
        Segment seg;
        seg.index = i;
        seg.start_frame = start;
        seg.fps = clip.fps();
        seg.frames.assign(frames.begin() + static_cast<std::ptrdiff_t>(start),
                          frames.begin() + static_cast<std::ptrdiff_t>(stop));
        seg.is_short = (stop - start) < segment_len;
        out.push_back(std::move(seg));
    }
    return out;
}

Clip concat_segments(std::span<const Segment> segments, double fps) {
    std::vector<Frame> frames;
    for (const Segment& s : segments) frames.insert(frames.end(), s.frames.begin(), s.frames.end());
    return Clip(fps, std::move(frames));
}

Frame quantize(const Frame& frame) {
    std::vector<double> q(frame.luma().begin(), frame.luma().end());
    for (double& v : q) v = std::nearbyint(v);
    return Frame(frame.width(), frame.height(), std::move(q));
}

Clip quantize(const Clip& clip) {
    std::vector<Frame> frames;
    frames.reserve(clip.size());
    for (const Frame& f : clip.frames()) frames.push_back(quantize(f));
    return Clip(clip.fps(), std::move(frames));
}

double rgb_to_luma(double r, double g, double b) {
    return std::nearbyint(0.299 * r + 0.587 * g + 0.114 * b);
}

Clip synth_sine(double freq, double fps, std::size_t n_frames, std::size_t width,
                std::size_t height, double amplitude, double mean) {
    require(fps > 0.0, ErrorKind::parameter, "fps must be positive");
    require(freq >= 0.0 && freq < fps / 2.0, ErrorKind::parameter,
            "sine frequency must lie in [0, fps/2)");
    require(amplitude >= 0.0 && amplitude <= 127.0, ErrorKind::parameter,
            "amplitude must lie in [0, 127]");
    require(mean - amplitude >= 0.0 && mean + amplitude <= 255.0, ErrorKind::parameter,
            "mean +/- amplitude leaves the [0, 255] luma range");

    std::vector<Frame> frames;
    frames.reserve(n_frames);
    for (std::size_t n = 0; n < n_frames; ++n) {
        const double cycles = std::fmod(freq * static_cast<double>(n), fps) / fps;
        const double v = mean + amplitude * std::sin(2.0 * std::numbers::pi * cycles);
        frames.push_back(Frame::filled(width, height, std::clamp(v, 0.0, 255.0)));
    }
    return Clip(fps, std::move(frames));
}

Clip synth_translate(Pattern pattern, double velocity, double fps, std::size_t n_frames,
                     std::size_t width, std::size_t height, std::size_t cell) {
    require(velocity >= 0.0 && std::isfinite(velocity), ErrorKind::parameter,
            "velocity must be non-negative");
    require(width >= 1 && height >= 1, ErrorKind::dimension, "empty frame size");
    require(cell >= 1, ErrorKind::parameter, "checker cell must be >= 1 pixel");

    std::vector<double> base(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            double v = 0.0;
            if (pattern == Pattern::checker) {
                v = ((x / cell + y / cell) % 2 == 0) ? 32.0 : 224.0;
            } else {
                v = width == 1 ? 0.0
                               : std::nearbyint(255.0 * static_cast<double>(x) /
                                                static_cast<double>(width - 1));
            }
            base[y * width + x] = v;
        }
    }

    std::vector<Frame> frames;
    frames.reserve(n_frames);
    for (std::size_t n = 0; n < n_frames; ++n) {
        const auto shift = static_cast<std::size_t>(
                               std::llround(static_cast<double>(n) * velocity)) % width;
        std::vector<double> luma(width * height);
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                luma[y * width + (x + shift) % width] = base[y * width + x];
            }
        }
        frames.emplace_back(width, height, std::move(luma));
    }
    return Clip(fps, std::move(frames));
}

}  // namespace dlfr
