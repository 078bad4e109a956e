#include "dlfr/scheduler.hpp"

#include "dlfr/error.hpp"
#include "dlfr/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dlfr {
namespace {

ScheduleEntry pin_highest(ScheduleEntry e, const RateClass& top) {
    e.class_ordinal = top.ordinal;
    e.latent_rate = top.latent_rate;
    e.down_ratio = top.down_ratio;
    return e;
}

ScheduleEntry assign(ScheduleEntry e, const RateClass& cls) {
    e.class_ordinal = cls.ordinal;
    e.latent_rate = cls.latent_rate;
    e.down_ratio = cls.down_ratio;
    return e;
}

RateSchedule schedule_windows(std::span<const Frame> frames, std::size_t total_frames,
                              const SchedulerConfig& cfg) {
    cfg.validate();
    RateSchedule out;
    out.source_fps = cfg.source_fps;
    out.segment_len = cfg.segment_len;
    out.total_frames = total_frames;
    out.classes = cfg.classes;

    for (std::size_t start = 0, i = 0; start < total_frames; start += cfg.segment_len, ++i) {
        const std::size_t stop = std::min(total_frames, start + cfg.segment_len);
        ScheduleEntry e;
        e.segment = i;
        e.start_frame = start;
        e.frames = stop - start;
        e.is_short = e.frames < cfg.segment_len;
        const auto window = frames.subspan(start, stop - start);
        e.complexity = window.size() >= 2 ? content_complexity(window) : 0.0;
        out.entries.push_back(e);
    }
    return reclassify(out, cfg);
}

}  // namespace

std::size_t integral_ratio(double source_fps, double latent_rate) {
    require(latent_rate > 0.0 && std::isfinite(latent_rate), ErrorKind::parameter,
            "latent rate must be positive");
    const double ratio = source_fps / latent_rate;
    const double rounded = std::round(ratio);
    require(rounded >= 1.0 && std::abs(ratio - rounded) <= 1e-9 * rounded, ErrorKind::parameter,
            "rate " + std::to_string(latent_rate) + " Hz does not divide " +
                std::to_string(source_fps) + " fps into an integer ratio");
    return static_cast<std::size_t>(rounded);
}

std::vector<RateClass> make_rate_classes(double source_fps, std::span<const double> latent_rates) {
    require(!latent_rates.empty(), ErrorKind::config, "at least one rate class is required");
    std::vector<double> rates(latent_rates.begin(), latent_rates.end());
    std::sort(rates.begin(), rates.end());
    require(std::adjacent_find(rates.begin(), rates.end()) == rates.end(), ErrorKind::config,
            "rate classes must be distinct");

    std::vector<RateClass> out;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        RateClass c;
        c.ordinal = static_cast<int>(k + 1);
        c.latent_rate = rates[k];
        c.eff_freq = rates[k] / 2.0;
        c.down_ratio = integral_ratio(source_fps, rates[k]);
        out.push_back(c);
    }
    return out;
}

void SchedulerConfig::validate() const {
    require(source_fps > 0.0, ErrorKind::config, "source fps must be positive");
    require(!classes.empty(), ErrorKind::config, "no rate classes configured");
    require(thresholds.size() + 1 == classes.size(), ErrorKind::config,
            "need exactly " + std::to_string(classes.size() - 1) + " thresholds for " +
                std::to_string(classes.size()) + " classes");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        require(thresholds[i - 1] < thresholds[i], ErrorKind::config,
                "thresholds must be strictly ascending");
    for (std::size_t i = 1; i < classes.size(); ++i)
        require(classes[i - 1].eff_freq < classes[i].eff_freq, ErrorKind::config,
                "classes must be strictly ordered by frequency");
    require(segment_len >= 2, ErrorKind::config, "segment length must be >= 2");
}

SchedulerSettings SchedulerSettings::from(const KeyValues& kv) {
    return from(kv, SchedulerSettings{});
}

SchedulerSettings SchedulerSettings::from(const KeyValues& kv, SchedulerSettings base) {
    if (auto v = kv.get_doubles("classes")) base.class_rates = *v;
    if (auto v = kv.get_doubles("thresholds")) base.thresholds = *v;
    if (auto v = kv.get_bool("smoothing")) base.smoothing = *v;
    if (auto v = kv.get_int("segment_len")) {
        require(*v >= 2, ErrorKind::config, "segment_len must be >= 2");
        base.segment_len = static_cast<std::size_t>(*v);
    }
    return base;
}

SchedulerConfig SchedulerSettings::bind(double source_fps) const {
    SchedulerConfig cfg;
    cfg.source_fps = source_fps;
    std::vector<double> rates = class_rates;
    if (rates.empty()) rates = {source_fps / 16.0, source_fps / 8.0, source_fps / 4.0};
    try {
        cfg.classes = make_rate_classes(source_fps, rates);
    } catch (const Error& e) {
        fail(ErrorKind::config, e.what());
    }
    cfg.thresholds = thresholds;
    cfg.smoothing = smoothing;
    cfg.segment_len = segment_len.value_or(default_segment_length(source_fps));
    cfg.validate();
    return cfg;
}

std::size_t RateSchedule::latent_steps() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.latent_steps();
    return n;
}

double RateSchedule::compression_ratio() const noexcept {
    const std::size_t steps = latent_steps();
    return steps == 0 ? 1.0 : static_cast<double>(total_frames) / static_cast<double>(steps);
}

const RateClass& RateSchedule::class_for(int ordinal) const {
    for (const auto& c : classes)
        if (c.ordinal == ordinal) return c;
    fail(ErrorKind::parameter, "no rate class with ordinal " + std::to_string(ordinal));
}

double content_complexity(std::span<const Frame> frames) {
    require(frames.size() >= 2, ErrorKind::parameter,
            "content complexity needs at least two frames");
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < frames.size(); ++j) total += 1.0 - ssim(frames[j], frames[j + 1]);
    return total / static_cast<double>(frames.size() - 1);
}

double content_complexity(const Segment& seg) {
    return content_complexity(std::span<const Frame>(seg.frames));
}

const RateClass& classify(double complexity, const SchedulerConfig& cfg) {
    std::size_t k = 0;
    while (k < cfg.thresholds.size() && complexity > cfg.thresholds[k]) ++k;
    return cfg.classes[k];
}

RateSchedule reclassify(const RateSchedule& scored, const SchedulerConfig& cfg) {
    cfg.validate();
    require(std::abs(scored.source_fps - cfg.source_fps) <= 1e-9 * cfg.source_fps &&
                scored.segment_len == cfg.segment_len,
            ErrorKind::config, "schedule was scored with a different frame rate or segment length");
    RateSchedule out = scored;
    out.classes = cfg.classes;
    for (auto& e : out.entries)
        e = e.is_short ? pin_highest(e, cfg.highest()) : assign(e, classify(e.complexity, cfg));
    return cfg.smoothing ? smooth(out) : out;
}

RateSchedule schedule(const Clip& clip, const SchedulerConfig& cfg) {
    require(!clip.empty(), ErrorKind::parameter, "cannot schedule an empty clip");
    require(std::abs(clip.fps() - cfg.source_fps) <= 1e-9 * cfg.source_fps, ErrorKind::config,
            "scheduler configured for a different frame rate than the clip");
    return schedule_windows(clip.frames(), clip.size(), cfg);
}

RateSchedule smooth(const RateSchedule& raw) {
    RateSchedule out = raw;
    auto& e = out.entries;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 1; i < e.size(); ++i) {
            if (e[i].class_ordinal < e[i - 1].class_ordinal - 1) {
                e[i] = assign(e[i], out.class_for(e[i - 1].class_ordinal - 1));
                changed = true;
            }
        }
        for (std::size_t i = e.size(); i-- > 1;) {
            if (e[i - 1].class_ordinal < e[i].class_ordinal - 1) {
                e[i - 1] = assign(e[i - 1], out.class_for(e[i].class_ordinal - 1));
                changed = true;
            }
        }
    }
    return out;
}

RateSchedule schedule_from_proxy(const Clip& proxy, double target_fps, std::size_t target_frames,
                                 const SchedulerConfig& cfg) {
    require(target_frames > 0, ErrorKind::parameter, "empty target timeline");
    require(std::abs(target_fps - cfg.source_fps) <= 1e-9 * cfg.source_fps, ErrorKind::config,
            "scheduler configured for a different frame rate than the target");
    const double ratio = proxy.fps() / target_fps;
    const double step = std::round(ratio);
    require(step >= 1.0 && std::abs(ratio - step) <= 1e-9 * step, ErrorKind::parameter,
            "proxy fps must be an integer multiple of the target fps");
    const auto stride = static_cast<std::size_t>(step);

    std::vector<Frame> aligned;
    for (std::size_t i = 0; i < proxy.size(); i += stride) aligned.push_back(proxy[i]);
    require(aligned.size() >= target_frames, ErrorKind::parameter,
            "proxy is shorter than the target timeline");
    aligned.erase(aligned.begin() + static_cast<std::ptrdiff_t>(target_frames), aligned.end());
    return schedule_windows(aligned, target_frames, cfg);
}

RateSchedule uniform_schedule(std::size_t total_frames, double source_fps,
                              std::size_t segment_len, double latent_rate) {
    require(segment_len >= 2, ErrorKind::parameter, "segment length must be >= 2");
    RateSchedule out;
    out.source_fps = source_fps;
    out.segment_len = segment_len;
    out.total_frames = total_frames;
    const double rates[] = {latent_rate};
    out.classes = make_rate_classes(source_fps, rates);
    for (std::size_t start = 0, i = 0; start < total_frames; start += segment_len, ++i) {
        ScheduleEntry e;
        e.segment = i;
        e.start_frame = start;
        e.frames = std::min(segment_len, total_frames - start);
        e.is_short = e.frames < segment_len;
        out.entries.push_back(assign(e, out.classes.front()));
    }
    return out;
}

}  // namespace dlfr
