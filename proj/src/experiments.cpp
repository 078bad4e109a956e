#include "dlfr/experiments.hpp"

#include "dlfr/error.hpp"
#include "dlfr/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>

namespace dlfr {
namespace {

double common_fps(std::span<const NamedClip> corpus) {
    require(!corpus.empty(), ErrorKind::parameter, "empty corpus");
    const double fps = corpus.front().clip.fps();
    for (const auto& c : corpus)
        require(c.clip.fps() == fps, ErrorKind::parameter, "corpus mixes frame rates");
    return fps;
}

std::string velocity_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void choose(std::span<const double> values, std::size_t count, std::size_t start,
            std::vector<double>& cur, std::vector<std::vector<double>>& out) {
    if (cur.size() == count) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < values.size(); ++i) {
        cur.push_back(values[i]);
        choose(values, count, i + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<NamedClip> mixed_motion_corpus(std::size_t still, std::size_t moving,
                                           const CorpusShape& shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> cells(2, 4);
    std::uniform_int_distribution<int> speed(3, 8);  // half pixels per frame

    std::vector<NamedClip> out;
    for (std::size_t i = 0; i < still + moving; ++i) {
        const bool moves = i >= still;
        const Pattern pattern = coin(rng) ? Pattern::gradient : Pattern::checker;
        const std::size_t cell = static_cast<std::size_t>(cells(rng)) * 2;
        const double v = moves ? 0.5 * speed(rng) : 0.0;
        std::string name = std::string(moves ? "moving" : "still") + "_" + std::to_string(i) +
                           "_" + (pattern == Pattern::checker ? "checker" : "gradient") + "_v" +
                           velocity_label(v);
        out.push_back({std::move(name), synth_translate(pattern, v, shape.fps, shape.frames,
                                                        shape.width, shape.height, cell)});
    }
    return out;
}

std::vector<double> default_sweep_velocities() { return {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}; }

std::vector<NamedClip> graded_motion_corpus(std::span<const double> velocities,
                                            const CorpusShape& shape) {
    std::vector<NamedClip> out;
    for (double v : velocities) {
        out.push_back({"checker_v" + velocity_label(v),
                       synth_translate(Pattern::checker, v, shape.fps, shape.frames, shape.width,
                                       shape.height)});
        out.push_back({"gradient_v" + velocity_label(v),
                       synth_translate(Pattern::gradient, v, shape.fps, shape.frames, shape.width,
                                       shape.height)});
    }
    return out;
}

std::size_t matched_static_ratio(double cr, std::size_t max_ratio) {
    require(cr >= 1.0 && std::isfinite(cr), ErrorKind::parameter,
            "compression ratio must be at least 1");
    require(max_ratio >= 1, ErrorKind::parameter, "no admissible static ratio");
    std::size_t best = 1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r <= max_ratio; ++r) {
        const double gap = std::abs(1.0 / static_cast<double>(r) - 1.0 / cr);
        if (gap < best_gap) {
            best_gap = gap;
            best = r;
        }
    }
    return best;
}

EvalReport roundtrip_eval(std::span<const NamedClip> corpus, const SchedulerSettings& settings,
                          const Pipeline& pipeline, const CodecOptions& options) {
    const double fps = common_fps(corpus);
    const SchedulerConfig cfg = settings.bind(fps);

    EvalReport rep;
    std::size_t frames = 0, steps = 0, max_ratio = 0;
    std::vector<RateSchedule> dynamic;
    for (const auto& c : corpus) {
        dynamic.push_back(schedule(c.clip, cfg));
        frames += c.clip.size();
        steps += dynamic.back().latent_steps();
        for (const auto& cls : cfg.classes) max_ratio = std::max(max_ratio, cls.down_ratio);
    }
    rep.dynamic_cr = static_cast<double>(frames) / static_cast<double>(steps);

    const std::size_t ratio = matched_static_ratio(rep.dynamic_cr, max_ratio);
    rep.static_rate = fps / static_cast<double>(ratio);
    std::size_t static_steps = 0;

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Clip& clip = corpus[i].clip;
        const auto uni = uniform_schedule(clip.size(), fps, cfg.segment_len, rep.static_rate);
        const auto dq = clip_quality(clip, roundtrip(clip, dynamic[i], pipeline, options));
        const auto sq = clip_quality(clip, roundtrip(clip, uni, pipeline, options));
        static_steps += uni.latent_steps();
        rep.rows.push_back({corpus[i].name, clip.size(), dynamic[i].compression_ratio(), dq.ssim,
                            dq.psnr, uni.compression_ratio(), sq.ssim, sq.psnr});
    }
    rep.static_cr = static_cast<double>(frames) / static_cast<double>(static_steps);
    for (const auto& r : rep.rows) {
        rep.dynamic_mean_ssim += r.dynamic_ssim;
        rep.static_mean_ssim += r.static_ssim;
        rep.dynamic_mean_psnr += r.dynamic_psnr;
        rep.static_mean_psnr += r.static_psnr;
    }
    const auto n = static_cast<double>(rep.rows.size());
    rep.dynamic_mean_ssim /= n;
    rep.static_mean_ssim /= n;
    rep.dynamic_mean_psnr /= n;
    rep.static_mean_psnr /= n;
    return rep;
}

std::vector<std::vector<double>> threshold_grid(std::span<const double> values,
                                                std::size_t count) {
    require(count >= 1, ErrorKind::parameter, "need at least one threshold");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::vector<double>> out;
    std::vector<double> cur;
    choose(sorted, count, 0, cur, out);
    require(!out.empty(), ErrorKind::parameter,
            "threshold grid needs at least " + std::to_string(count) + " distinct values");
    return out;
}

std::vector<SweepPoint> threshold_sweep(std::span<const NamedClip> corpus,
                                        const SchedulerSettings& settings,
                                        std::span<const std::vector<double>> grid,
                                        const Pipeline& pipeline, const CodecOptions& options) {
    require(!grid.empty(), ErrorKind::parameter, "empty threshold grid");
    const double fps = common_fps(corpus);
    const SchedulerConfig base = settings.bind(fps);

    std::vector<RateSchedule> scored;
    for (const auto& c : corpus) scored.push_back(schedule(c.clip, base));

    // Mean SSIM per clip, keyed by the per-segment ratios.
    std::vector<std::map<std::vector<std::size_t>, double>> memo(corpus.size());

    std::vector<SweepPoint> points;
    for (const auto& th : grid) {
        SchedulerConfig cfg = base;
        cfg.thresholds = th;
        SweepPoint pt{th, 1.0, 0.0};
        std::size_t frames = 0, steps = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto sched = reclassify(scored[i], cfg);
            frames += sched.total_frames;
            steps += sched.latent_steps();
            std::vector<std::size_t> key;
            for (const auto& e : sched.entries) key.push_back(e.down_ratio);
            auto it = memo[i].find(key);
            if (it == memo[i].end()) {
                const Clip& clip = corpus[i].clip;
                const double q = clip_quality(clip, roundtrip(clip, sched, pipeline, options)).ssim;
                it = memo[i].emplace(std::move(key), q).first;
            }
            pt.mean_ssim += it->second;
        }
        pt.mean_ssim /= static_cast<double>(corpus.size());
        pt.compression_ratio = static_cast<double>(frames) / static_cast<double>(steps);
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<std::size_t> pareto_frontier(std::span<const SweepPoint> points) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
            const auto& q = points[j];
            const bool ge = q.compression_ratio >= p.compression_ratio && q.mean_ssim >= p.mean_ssim;
            const bool gt = q.compression_ratio > p.compression_ratio || q.mean_ssim > p.mean_ssim;
            dominated = ge && (gt || j < i);
        }
        if (!dominated) out.push_back(i);
    }
    std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
        return points[a].compression_ratio < points[b].compression_ratio;
    });
    return out;
}

}  // namespace dlfr
