#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dlfr {

/// A single luma plane. Samples are real values in [0, 255], row-major.
class Frame {
public:
    /// Throws ErrorKind::dimension for a zero-sized or wrongly sized plane and
    /// ErrorKind::parameter for samples that are non-finite or out of range.
    Frame(std::size_t width, std::size_t height, std::vector<double> luma);

    /// Uniform frame.
    static Frame filled(std::size_t width, std::size_t height, double value);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return luma_.size(); }
    std::span<const double> luma() const noexcept { return luma_; }
    std::span<const double> row(std::size_t y) const noexcept {
        return std::span<const double>(luma_).subspan(y * width_, width_);
    }
    double at(std::size_t x, std::size_t y) const noexcept {
        return luma_[y * width_ + x];
    }

    bool same_shape(const Frame& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> luma_;
};

/// Frames sampled at a fixed rate. All frames share one shape.
class Clip {
public:
    Clip(double fps, std::vector<Frame> frames);

    double fps() const noexcept { return fps_; }
    double sampling_interval() const noexcept { return 1.0 / fps_; }
    std::size_t size() const noexcept { return frames_.size(); }
    bool empty() const noexcept { return frames_.empty(); }
    const std::vector<Frame>& frames() const noexcept { return frames_; }
    const Frame& operator[](std::size_t i) const { return frames_[i]; }
    std::size_t width() const noexcept;
    std::size_t height() const noexcept;

    friend bool operator==(const Clip&, const Clip&) = default;

private:
    double fps_;
    std::vector<Frame> frames_;
};

/// A contiguous window of a clip, the scheduling unit.
struct Segment {
    std::size_t index = 0;
    std::size_t start_frame = 0;
    double fps = 0.0;
    std::vector<Frame> frames;
    /// Set on a trailing segment holding fewer frames than the nominal length.
    bool is_short = false;

    std::size_t size() const noexcept { return frames.size(); }
    double duration() const noexcept { return static_cast<double>(frames.size()) / fps; }
};

/// Default segment length for a frame rate: one second of frames, at least 2.
std::size_t default_segment_length(double fps);

/// Splits a clip into ceil(len/N) windows of N frames; segment i starts at
/// frame i*N. Requires N >= 2 and a non-empty clip.
std::vector<Segment> segment_clip(const Clip& clip, std::size_t segment_len);

/// Inverse of segment_clip.
Clip concat_segments(std::span<const Segment> segments, double fps);

/// Rounds every sample to the nearest integer (file-output quantization).
Frame quantize(const Frame& frame);
Clip quantize(const Clip& clip);

/// ITU-R BT.601 luma, rounded to the nearest integer.
double rgb_to_luma(double r, double g, double b);

/// Spatially constant clip whose value at frame n is
/// mean + amplitude*sin(2*pi*freq*n/fps).
Clip synth_sine(double freq, double fps, std::size_t n_frames, std::size_t width,
                std::size_t height, double amplitude, double mean);

enum class Pattern { checker, gradient };

/// Base pattern shifted cyclically right by round(n*velocity) pixels in frame n.
/// `cell` is the checker square size (ignored for the gradient).
Clip synth_translate(Pattern pattern, double velocity, double fps,
                     std::size_t n_frames, std::size_t width, std::size_t height,
                     std::size_t cell = 8);

}  // namespace dlfr
