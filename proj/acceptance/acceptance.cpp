// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include "dlfr/container.hpp"
#include "dlfr/cost_model.hpp"
#include "dlfr/experiments.hpp"
#include "dlfr/rope.hpp"
#include "dlfr/spectrum.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace dlfr;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string hz(std::optional<double> f) { return f ? fmt("%g Hz", *f) : "none"; }

Outcome nyquist_roundtrip() {
    const auto t0 = Clock::now();
    const Clip src = synth_sine(2, 16, 64, 32, 32, 64, 88);
    const auto pipe = Pipeline::identity();
    const CodecOptions opt{DownMethod::linear, UpMethod::linear, std::nullopt};

    const Clip hi = roundtrip(src, uniform_schedule(64, 16, 16, 8), pipe, opt);
    const Clip lo = roundtrip(src, uniform_schedule(64, 16, 16, 2), pipe, opt);
    const double ssim_hi = clip_quality(src, hi).ssim;
    const double ssim_lo = clip_quality(src, lo).ssim;
    const auto dom_hi = dominant_frequency(clip_spectrum(hi, 8));
    const auto dom_lo = dominant_frequency(clip_spectrum(lo, 8));
    const double secs = seconds_since(t0);

    const bool ok = ssim_hi >= 0.95 && dom_hi && *dom_hi == 2.0 && (!dom_lo || *dom_lo != 2.0) &&
                    ssim_hi - ssim_lo >= 0.10 && secs < 1.0;
    return {ok, fmt("8 Hz: ssim %.4f dominant %s; 2 Hz: ssim %.4f dominant %s; %.3f s", ssim_hi,
                    hz(dom_hi).c_str(), ssim_lo, hz(dom_lo).c_str(), secs)};
}

Outcome feff_accuracy() {
    const auto t0 = Clock::now();
    int exact = 0, total = 0;
    for (double amp : {20.0, 40.0, 60.0})
        for (int f = 1; f <= 7 && total < 20; ++f) {
            const Clip c = synth_sine(f, 16, 16, 8, 8, amp, 128);
            const auto got = effective_frequency(clip_spectrum(c, 4), amp / 2);
            exact += got && *got == double(f);
            ++total;
        }
    const double secs = seconds_since(t0);
    return {exact == 20 && total == 20 && secs < 1.0,
            fmt("%d/%d tones exact; %.3f s", exact, total, secs)};
}

Outcome complexity_monotone() {
    std::vector<double> v{0, 1, 2, 4, 8}, c;
    for (double vel : v) {
        const Clip clip = synth_translate(Pattern::checker, vel, 16, 16, 64, 64);
        c.push_back(content_complexity(std::span<const Frame>(clip.frames())));
    }
    bool strict = true;
    for (std::size_t i = 1; i < c.size(); ++i) strict &= c[i] > c[i - 1];
    const double rho = oracle::spearman(v, c);
    return {strict && rho == 1.0, fmt("C = %.4f %.4f %.4f %.4f %.4f; spearman %.3f", c[0], c[1],
                                      c[2], c[3], c[4], rho)};
}

Outcome dynamic_dominates() {
    const auto t0 = Clock::now();
    const auto corpus = mixed_motion_corpus(10, 10, CorpusShape{}, 0);
    SchedulerSettings s;
    s.class_rates = {2, 4, 6};
    const auto rep = roundtrip_eval(corpus, s, Pipeline::identity());
    const double margin = rep.dynamic_mean_ssim - rep.static_mean_ssim;
    const double secs = seconds_since(t0);
    return {rep.dynamic_cr == rep.static_cr && margin >= 0.02 && secs < 30.0,
            fmt("CR %.3f vs %.3f; ssim %.4f vs %.4f; margin %.4f; %.2f s", rep.dynamic_cr,
                rep.static_cr, rep.dynamic_mean_ssim, rep.static_mean_ssim, margin, secs)};
}

Outcome scheduler_algebra() {
    SchedulerConfig cfg;
    cfg.source_fps = 16;
    const double rates[] = {1, 2, 4};
    cfg.classes = make_rate_classes(16, rates);
    cfg.thresholds = {0.05, 0.15};
    cfg.segment_len = 16;

    bool ok = cfg.classes[0].down_ratio == 16 && cfg.classes[1].down_ratio == 8 &&
              cfg.classes[2].down_ratio == 4;
    ok &= classify(0.05, cfg).ordinal == 1 && classify(0.15, cfg).ordinal == 2 &&
          classify(std::nextafter(0.15, 1.0), cfg).ordinal == 3;

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> cx(0, 0.4);
    for (int trial = 0; trial < 200 && ok; ++trial) {
        RateSchedule raw = uniform_schedule(16 * (1 + trial % 12), 16, 16, 4);
        raw.classes = cfg.classes;
        for (auto& e : raw.entries) {
            e.complexity = cx(rng);
            const auto& k = classify(e.complexity, cfg);
            e.class_ordinal = k.ordinal;
            e.latent_rate = k.latent_rate;
            e.down_ratio = k.down_ratio;
            ok &= e.latent_rate == 2 * k.eff_freq;
        }
        const auto sm = smooth(raw);
        ok &= smooth(sm) == sm;
        for (std::size_t i = 0; i < sm.entries.size(); ++i) {
            ok &= sm.entries[i].class_ordinal >= raw.entries[i].class_ordinal;
            ok &= sm.entries[i].latent_rate ==
                  2 * cfg.classes[std::size_t(sm.entries[i].class_ordinal - 1)].eff_freq;
            if (i) ok &= std::abs(sm.entries[i].class_ordinal - sm.entries[i - 1].class_ordinal) <= 1;
        }
    }
    return {ok, "boundaries, rates, smoothing and {16,8,4} ratios checked"};
}

Outcome container() {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<std::size_t> small(1, 4), count(0, 5);
    int exact = 0, detected = 0, corrupted = 0;
    for (int trial = 0; trial < 100; ++trial) {
        LatentStream s;
        s.source_fps = 24.0f;
        s.segment_len = std::uint32_t(8 + trial);
        s.descriptor = "trial " + std::to_string(trial);
        s.classes = {{1.0f, 12}, {2.0f, 6}, {3.0f, 4}};
        const std::size_t n = count(rng);
        for (std::size_t i = 0; i < n; ++i) {
            LatentSegment seg;
            seg.index = i;
            seg.latent_rate = 2.0f;
            seg.steps = small(rng);
            seg.channels = small(rng);
            seg.height = small(rng);
            seg.width = small(rng);
            for (double v : oracle::random_vector(rng, seg.steps * seg.step_size(), -100, 100))
                seg.data.push_back(float(v));
            s.segments.push_back(std::move(seg));
        }
        const auto bytes = serialize(s);
        const auto back = deserialize(bytes);
        exact += back == s && serialize(back) == bytes;

        for (const auto& sp : payload_spans(bytes))
            for (std::size_t i = sp.offset; i < sp.offset + sp.length; ++i) {
                auto bad = bytes;
                bad[i] ^= std::uint8_t(1u << (i % 8));
                ++corrupted;
                detected += oracle::thrown_kind([&] { deserialize(bad); }) == ErrorKind::checksum;
            }
    }
    return {exact == 100 && detected == corrupted && corrupted > 0,
            fmt("%d/100 byte-exact; %d/%d corruptions detected", exact, detected, corrupted)};
}

Outcome rope_suite() {
    const std::vector<double> ones(32, 1.0);
    const auto t = rope_table(ones, 16);
    const auto st = standard_rope_table(32, 16);
    double table_diff = 0;
    for (std::size_t i = 0; i < t.cos.size(); ++i)
        table_diff = std::max({table_diff, std::abs(t.cos[i] - st.cos[i]),
                               std::abs(t.sin[i] - st.sin[i])});

    std::mt19937_64 rng(7);
    double shift_err = 0, norm_err = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto q = oracle::random_vector(rng, 16, -1, 1);
        const auto k = oracle::random_vector(rng, 16, -1, 1);
        const auto p = oracle::random_vector(rng, 3, -100, 100);
        shift_err = std::max(shift_err, std::abs(attention_score(q, k, p[0] + p[2], p[1] + p[2]) -
                                                 attention_score(q, k, p[0], p[1])));
        const auto r = rope_rotate(q, p[0]);
        double a = 0, b = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            a += q[i] * q[i];
            b += r[i] * r[i];
        }
        norm_err = std::max(norm_err, std::abs(std::sqrt(a) - std::sqrt(b)));
    }
    const std::vector<double> d{1, 1, 2, 2};
    const bool pos = positions_from_durations(d) == std::vector<double>{0, 1, 2, 4};
    return {table_diff < 1e-12 && shift_err < 1e-9 && norm_err < 1e-12 && pos,
            fmt("table %.2g; shift %.2g; norm %.2g; positions %s", table_diff, shift_err,
                norm_err, pos ? "ok" : "wrong")};
}

Outcome cost_model() {
    const double pure = estimate_speedup(3, 1, 1.0);
    const std::vector<SpeedupObservation> r720{{4.0 / 6, 2.04}, {4.0 / 8, 3.11}, {4.0 / 12, 6.25}};
    const std::vector<SpeedupObservation> r540{{4.0 / 6, 2.15}, {4.0 / 8, 3.23}, {4.0 / 12, 6.16}};
    const double a720 = calibrate_quad_fraction(r720), a540 = calibrate_quad_fraction(r540);
    const double e720 = max_abs_residual(r720, a720), e540 = max_abs_residual(r540, a540);
    return {std::abs(pure - 9.0) < 1e-12 && e720 <= 0.2 && e540 <= 0.2,
            fmt("alpha=1 -> %.4f; 720p alpha %.4f err %.4f; 540p alpha %.4f err %.4f", pure, a720,
                e720, a540, e540)};
}

Outcome threshold_frontier() {
    const auto v = default_sweep_velocities();
    const auto corpus = graded_motion_corpus(v, CorpusShape{});
    SchedulerSettings s;
    s.class_rates = {2, 4, 6};
    const std::vector<double> values{0, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.6};
    const auto grid = threshold_grid(values, 2);
    const auto pts = threshold_sweep(corpus, s, grid, Pipeline::identity());
    const auto front = pareto_frontier(pts);
    bool monotone = true;
    for (std::size_t i = 1; i < front.size(); ++i)
        monotone &= pts[front[i]].compression_ratio > pts[front[i - 1]].compression_ratio &&
                    pts[front[i]].mean_ssim <= pts[front[i - 1]].mean_ssim;
    return {front.size() >= 3 && monotone,
            fmt("%zu grid points; frontier %zu points, CR %.3f..%.3f", pts.size(), front.size(),
                pts[front.front()].compression_ratio, pts[front.back()].compression_ratio)};
}

Outcome placement_search() {
    const auto pipe = Pipeline::parse("slot,pool:2,slot,linear:2:7:tanh,slot,id,slot");
    std::vector<Clip> corpus;
    for (const auto& c : mixed_motion_corpus(0, 4, CorpusShape{}, 0)) corpus.push_back(c.clip);
    const double rate = 6;
    const auto res = search_placement(pipe, corpus, rate, DownMethod::average);
    const auto all = enumerate_placements(pipe, res.ratio);

    bool table_ok = res.table.size() == all.size();
    std::size_t best = 0;
    double best_ssim = -1;
    for (std::size_t i = 0; i < all.size() && table_ok; ++i) {
        const auto again = evaluate_placement(pipe, all[i], corpus, rate, DownMethod::average);
        table_ok &= res.table[i].placement == all[i] && again.mean_ssim == res.table[i].mean_ssim;
        if (again.mean_ssim > best_ssim) {
            best_ssim = again.mean_ssim;
            best = i;
        }
    }
    double worst = 1;
    for (const auto& r : res.table) worst = std::min(worst, r.mean_ssim);
    return {table_ok && best == res.best,
            fmt("%zu placements; best %s ssim %.4f (worst %.4f)", res.table.size(),
                res.best_score().placement.to_string().c_str(), res.best_score().mean_ssim, worst)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"nyquist roundtrip", nyquist_roundtrip},
        {"f_eff accuracy", feff_accuracy},
        {"complexity monotonicity", complexity_monotone},
        {"dynamic dominates static", dynamic_dominates},
        {"scheduler algebra", scheduler_algebra},
        {"container", container},
        {"rope suite", rope_suite},
        {"cost model", cost_model},
        {"threshold sweep frontier", threshold_frontier},
        {"placement search", placement_search},
    };
    int failed = 0, n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
