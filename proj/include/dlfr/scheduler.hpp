#pragma once

#include "dlfr/config.hpp"
#include "dlfr/video.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dlfr {

/// One discrete complexity level. Classes are configured by their latent
/// frame rate; the effective frequency is half of it.
struct RateClass {
    int ordinal = 1;           // 1 = lowest rate (most compression)
    double eff_freq = 0.0;     // Hz
    double latent_rate = 0.0;  // 2 * eff_freq, Hz
    std::size_t down_ratio = 1;  // source_fps / latent_rate, integral

    friend bool operator==(const RateClass&, const RateClass&) = default;
};

/// Builds classes from latent rates in Hz, sorted ascending. Every rate must
/// divide `source_fps` into an integer ratio, and rates must be distinct.
std::vector<RateClass> make_rate_classes(double source_fps, std::span<const double> latent_rates);

/// Integer ratio source_fps/latent_rate, or ErrorKind::parameter.
std::size_t integral_ratio(double source_fps, double latent_rate);

struct SchedulerConfig {
    double source_fps = 0.0;
    std::vector<RateClass> classes;
    std::vector<double> thresholds;  // strictly ascending, classes.size()-1 of them
    bool smoothing = true;
    std::size_t segment_len = 2;

    const RateClass& lowest() const { return classes.front(); }
    const RateClass& highest() const { return classes.back(); }

    /// Throws ErrorKind::config on any inconsistency.
    void validate() const;
};

/// Frame-rate independent scheduler settings, bound to a clip's rate later.
struct SchedulerSettings {
    std::vector<double> class_rates;  // latent rates in Hz; empty -> ratios {16, 8, 4}
    std::vector<double> thresholds{0.05, 0.15};
    bool smoothing = true;
    std::optional<std::size_t> segment_len;  // default: one second of frames

    /// Reads `classes`, `thresholds`, `smoothing` and `segment_len` keys.
    static SchedulerSettings from(const KeyValues& kv);
    static SchedulerSettings from(const KeyValues& kv, SchedulerSettings base);

    SchedulerConfig bind(double source_fps) const;
};

struct ScheduleEntry {
    std::size_t segment = 0;
    std::size_t start_frame = 0;
    std::size_t frames = 0;
    double complexity = 0.0;
    int class_ordinal = 1;
    double latent_rate = 0.0;
    std::size_t down_ratio = 1;
    bool is_short = false;

    /// ceil(frames / down_ratio); equals duration * latent_rate whenever the
    /// ratio divides the segment length.
    std::size_t latent_steps() const noexcept { return (frames + down_ratio - 1) / down_ratio; }

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct RateSchedule {
    double source_fps = 0.0;
    std::size_t segment_len = 0;
    std::size_t total_frames = 0;
    std::vector<RateClass> classes;
    std::vector<ScheduleEntry> entries;

    std::size_t latent_steps() const noexcept;
    /// total_frames / latent_steps.
    double compression_ratio() const noexcept;
    const RateClass& class_for(int ordinal) const;

    friend bool operator==(const RateSchedule&, const RateSchedule&) = default;
};

/// Mean of (1 - SSIM) over the adjacent frame pairs.
double content_complexity(std::span<const Frame> frames);
double content_complexity(const Segment& seg);

/// Class k with Th_{k-1} < c <= Th_k (Th_0 = -inf, Th_N = +inf).
const RateClass& classify(double complexity, const SchedulerConfig& cfg);

RateSchedule schedule(const Clip& clip, const SchedulerConfig& cfg);

/// Reassigns classes from the complexities already stored in `scored`,
/// e.g. to try other thresholds without rescoring.
RateSchedule reclassify(const RateSchedule& scored, const SchedulerConfig& cfg);

/// Limits neighbouring class ordinals to differ by at most one, raising the
/// lower side only. Idempotent.
RateSchedule smooth(const RateSchedule& raw);

/// Schedules a target timeline from a rough proxy clip. The proxy is first
/// decimated to the target rate (its fps must be an integer multiple), then
/// each target segment is scored on the time-aligned proxy frames.
RateSchedule schedule_from_proxy(const Clip& proxy, double target_fps, std::size_t target_frames,
                                 const SchedulerConfig& cfg);

/// Every segment at one latent rate (the static baseline).
RateSchedule uniform_schedule(std::size_t total_frames, double source_fps,
                              std::size_t segment_len, double latent_rate);

}  // namespace dlfr
