#include "cli.hpp"

#include "report.hpp"

#include "dlfr/clip_io.hpp"
#include "dlfr/codec.hpp"
#include "dlfr/config.hpp"
#include "dlfr/container.hpp"
#include "dlfr/cost_model.hpp"
#include "dlfr/experiments.hpp"
#include "dlfr/rope.hpp"
#include "dlfr/spectrum.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

namespace dlfr::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kDefaultEpsilon = 1.8;
constexpr const char* kDefaultGrid = "0,0.02,0.05,0.1,0.15,0.2,0.3,0.4,0.6";

struct Context {
    KeyValues kv;
    std::vector<std::string> inputs;
    std::ostream* out = nullptr;
};

// Options whose values land in the settings map under a config key. Only
// options given on the command line override the config file.
class KeyedOptions {
public:
    void add(CLI::App* app, const std::string& flag, const std::string& key,
             const std::string& help) {
        opts_.emplace_back(key, app->add_option(flag, values_[key], help));
    }
    void apply(KeyValues& kv) const {
        for (const auto& [key, opt] : opts_)
            if (opt->count() > 0) kv.set(key, values_.at(key));
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::pair<std::string, CLI::Option*>> opts_;
};

std::string get_or(const KeyValues& kv, const std::string& key, const std::string& def) {
    return kv.get(key).value_or(def);
}

double double_or(const KeyValues& kv, const std::string& key, double def) {
    return kv.get_double(key).value_or(def);
}

std::size_t size_or(const KeyValues& kv, const std::string& key, std::size_t def) {
    const auto v = kv.get_int(key);
    if (!v) return def;
    require(*v >= 0, ErrorKind::config, key + " must be non-negative");
    return static_cast<std::size_t>(*v);
}

std::uint64_t seed_of(const KeyValues& kv) { return size_or(kv, "seed", 0); }

std::string required(const KeyValues& kv, const std::string& key) {
    auto v = kv.get(key);
    require(v.has_value() && !v->empty(), ErrorKind::config, "--" + key + " is required");
    return *v;
}

Pipeline pipeline_of(const KeyValues& kv) {
    return Pipeline::parse(get_or(kv, "pipeline", "slot"), seed_of(kv));
}

CodecOptions codec_options(const KeyValues& kv) {
    CodecOptions o;
    o.down = parse_down_method(get_or(kv, "down", "drop"));
    o.up = parse_up_method(get_or(kv, "up", "linear"));
    if (auto p = kv.get("placement"); p && !p->empty()) o.placement = Placement::parse(*p);
    return o;
}

CorpusShape corpus_shape(const KeyValues& kv) {
    CorpusShape s;
    s.fps = double_or(kv, "fps", s.fps);
    s.frames = size_or(kv, "frames", s.frames);
    s.width = size_or(kv, "width", s.width);
    s.height = size_or(kv, "height", s.height);
    return s;
}

std::string clip_name(const std::string& path) {
    fs::path p(path);
    if (!p.has_filename()) p = p.parent_path();
    return p.stem().string();
}

std::vector<NamedClip> load_inputs(const Context& ctx) {
    std::vector<NamedClip> out;
    for (const auto& path : ctx.inputs) out.push_back({clip_name(path), load_clip(path)});
    return out;
}

std::vector<NamedClip> corpus_of(const Context& ctx, const std::string& default_kind,
                                 std::size_t default_still, std::size_t default_moving) {
    if (!ctx.inputs.empty()) return load_inputs(ctx);
    const std::string kind = get_or(ctx.kv, "corpus", default_kind);
    const CorpusShape shape = corpus_shape(ctx.kv);
    if (kind == "mixed")
        return mixed_motion_corpus(size_or(ctx.kv, "still", default_still),
                                   size_or(ctx.kv, "moving", default_moving), shape,
                                   seed_of(ctx.kv));
    if (kind == "graded") {
        auto v = ctx.kv.get_doubles("velocities").value_or(default_sweep_velocities());
        return graded_motion_corpus(v, shape);
    }
    fail(ErrorKind::config, "unknown corpus '" + kind + "' (mixed, graded)");
}

Clip single_input(const Context& ctx) {
    require(ctx.inputs.size() == 1, ErrorKind::config, "exactly one --input is required");
    return load_clip(ctx.inputs.front());
}

void emit(const Table& table, const Context& ctx) {
    const auto format = parse_report_format(get_or(ctx.kv, "format", "csv"));
    if (auto path = ctx.kv.get("report"); path && !path->empty()) {
        std::ofstream f(*path);
        require(static_cast<bool>(f), ErrorKind::io, "cannot open report " + *path);
        table.write(f, format);
        require(static_cast<bool>(f), ErrorKind::io, "failed writing report " + *path);
        return;
    }
    table.write(*ctx.out, format);
}

long long ll(std::size_t v) { return static_cast<long long>(v); }

// --- subcommands --------------------------------------------------------------

void cmd_analyze(const Context& ctx) {
    require(!ctx.inputs.empty(), ErrorKind::config, "--input is required");
    const auto settings = SchedulerSettings::from(ctx.kv);
    const double eps = double_or(ctx.kv, "epsilon", kDefaultEpsilon);
    require(eps > 0.0, ErrorKind::config, "epsilon must be positive");
    const std::size_t stride = size_or(ctx.kv, "stride", 8);
    require(stride >= 1, ErrorKind::config, "stride must be at least 1");

    Table t({"clip", "segment", "start_frame", "frames", "complexity", "f_eff", "required_rate",
             "dominant", "class", "latent_rate", "down_ratio", "latent_steps"});
    for (const auto& [name, clip] : load_inputs(ctx)) {
        const auto cfg = settings.bind(clip.fps());
        const auto sched = schedule(clip, cfg);
        for (const auto& e : sched.entries) {
            const std::span<const Frame> window(clip.frames().data() + e.start_frame, e.frames);
            std::optional<double> f_eff, dominant;
            if (e.frames >= 2) {
                const auto spec =
                    with_threshold(dft_magnitude(temporal_signal(window, stride), clip.fps()), eps);
                f_eff = spec.f_eff;
                dominant = dominant_frequency(spec);
            }
            t.add({name, ll(e.segment), ll(e.start_frame), ll(e.frames), e.complexity, cell(f_eff),
                   required_rate(f_eff, cfg.lowest().latent_rate), cell(dominant),
                   static_cast<long long>(e.class_ordinal),
                   e.latent_rate, ll(e.down_ratio), ll(e.latent_steps())});
        }
    }
    emit(t, ctx);
}

void cmd_encode(const Context& ctx) {
    const Clip clip = single_input(ctx);
    const std::string output = required(ctx.kv, "output");
    const auto settings = SchedulerSettings::from(ctx.kv);
    const auto cfg = settings.bind(clip.fps());
    const auto sched = ctx.kv.contains("rate")
                           ? uniform_schedule(clip.size(), clip.fps(), cfg.segment_len,
                                              *ctx.kv.get_double("rate"))
                           : schedule(clip, cfg);
    const auto stream = encode(clip, sched, pipeline_of(ctx.kv), codec_options(ctx.kv));
    write_stream(output, stream);

    Table t({"segment", "start_frame", "frames", "complexity", "class", "latent_rate",
             "down_ratio", "latent_steps", "channels", "height", "width"});
    for (std::size_t i = 0; i < sched.entries.size(); ++i) {
        const auto& e = sched.entries[i];
        const auto& s = stream.segments[i];
        t.add({ll(e.segment), ll(e.start_frame), ll(e.frames), e.complexity,
               static_cast<long long>(e.class_ordinal), e.latent_rate, ll(e.down_ratio),
               ll(s.steps), ll(s.channels), ll(s.height), ll(s.width)});
    }
    emit(t, ctx);
}

void cmd_decode(const Context& ctx) {
    require(ctx.inputs.size() == 1, ErrorKind::config, "exactly one --input is required");
    const std::string output = required(ctx.kv, "output");
    const auto stream = read_stream(ctx.inputs.front());
    const Clip clip = decode(stream);
    save_clip(output, clip, parse_clip_format(get_or(ctx.kv, "clip_format", "raw")));

    Table t({"frames", "width", "height", "fps", "segments", "compression_ratio"});
    t.add({ll(clip.size()), ll(clip.width()), ll(clip.height()), clip.fps(),
           ll(stream.segments.size()), stream_compression_ratio(stream)});
    emit(t, ctx);
}

void cmd_eval(const Context& ctx) {
    const auto corpus = corpus_of(ctx, "mixed", 10, 10);
    const auto rep = roundtrip_eval(corpus, SchedulerSettings::from(ctx.kv), pipeline_of(ctx.kv),
                                    codec_options(ctx.kv));
    Table t({"clip", "frames", "dynamic_cr", "dynamic_ssim", "dynamic_psnr", "static_rate",
             "static_cr", "static_ssim", "static_psnr"});
    std::size_t frames = 0;
    for (const auto& r : rep.rows) {
        frames += r.frames;
        t.add({r.name, ll(r.frames), r.dynamic_cr, r.dynamic_ssim, r.dynamic_psnr, rep.static_rate,
               r.static_cr, r.static_ssim, r.static_psnr});
    }
    t.add({std::string("corpus"), ll(frames), rep.dynamic_cr, rep.dynamic_mean_ssim,
           rep.dynamic_mean_psnr, rep.static_rate, rep.static_cr, rep.static_mean_ssim,
           rep.static_mean_psnr});
    emit(t, ctx);
}

void cmd_sweep(const Context& ctx) {
    const auto corpus = corpus_of(ctx, "graded", 10, 10);
    const auto settings = SchedulerSettings::from(ctx.kv);
    const auto cfg = settings.bind(corpus.front().clip.fps());
    const auto values = parse_double_list(get_or(ctx.kv, "grid", kDefaultGrid), "grid");
    require(!values.empty(), ErrorKind::config, "threshold grid is empty");
    const std::size_t n = cfg.thresholds.size();
    require(n >= 1, ErrorKind::config, "sweeping needs at least two rate classes");
    const auto grid = threshold_grid(values, n);
    const auto points =
        threshold_sweep(corpus, settings, grid, pipeline_of(ctx.kv), codec_options(ctx.kv));
    const auto front = pareto_frontier(points);

    std::vector<std::string> cols;
    for (std::size_t k = 1; k <= n; ++k) cols.push_back("th" + std::to_string(k));
    for (const char* c : {"compression_ratio", "mean_ssim", "frontier"}) cols.emplace_back(c);
    Table t(std::move(cols));
    std::vector<bool> on_front(points.size(), false);
    for (auto i : front) on_front[i] = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<Cell> row;
        for (double th : points[i].thresholds) row.emplace_back(th);
        row.emplace_back(points[i].compression_ratio);
        row.emplace_back(points[i].mean_ssim);
        row.emplace_back(static_cast<long long>(on_front[i]));
        t.add(std::move(row));
    }
    emit(t, ctx);
}

void cmd_search(const Context& ctx) {
    const auto named = corpus_of(ctx, "mixed", 0, 4);
    std::vector<Clip> corpus;
    for (const auto& c : named) corpus.push_back(c.clip);
    const double fps = corpus.front().fps();
    const double rate = double_or(ctx.kv, "rate", fps / 4.0);
    const auto opts = codec_options(ctx.kv);
    const auto res = search_placement(pipeline_of(ctx.kv), corpus, rate, opts.down, opts.up);

    Table t({"placement", "ratio", "mean_ssim", "mean_psnr", "best"});
    for (std::size_t i = 0; i < res.table.size(); ++i) {
        const auto& s = res.table[i];
        t.add({s.placement.to_string(), ll(res.ratio), s.mean_ssim, s.mean_psnr,
               static_cast<long long>(i == res.best)});
    }
    emit(t, ctx);
}

struct ScheduleRows {
    std::string name;
    std::vector<std::size_t> frames;
    std::vector<std::size_t> ratios;
};

// Per-clip (frames, down_ratio) lists from an analyze report or from
// scheduling the inputs.
std::vector<ScheduleRows> schedules_of(const Context& ctx) {
    std::vector<ScheduleRows> out;
    if (auto path = ctx.kv.get("schedule"); path && !path->empty()) {
        std::ifstream in(*path);
        require(static_cast<bool>(in), ErrorKind::io, "cannot open schedule " + *path);
        const auto table = read_csv(in, *path);
        const auto fi = table.column("frames");
        const auto ri = table.column("down_ratio");
        std::optional<std::size_t> ci;
        for (std::size_t i = 0; i < table.header.size(); ++i)
            if (table.header[i] == "clip") ci = i;
        for (const auto& row : table.rows) {
            const std::string name = ci ? row[*ci] : clip_name(*path);
            if (out.empty() || out.back().name != name) out.push_back({name, {}, {}});
            try {
                const auto f = parse_int(row[fi], "frames");
                const auto r = parse_int(row[ri], "down_ratio");
                require(f >= 1 && r >= 1, ErrorKind::format, "schedule values must be positive");
                out.back().frames.push_back(static_cast<std::size_t>(f));
                out.back().ratios.push_back(static_cast<std::size_t>(r));
            } catch (const Error& e) {
                fail(ErrorKind::format, *path + ": " + e.what());
            }
        }
        return out;
    }
    require(!ctx.inputs.empty(), ErrorKind::config, "--input or --schedule is required");
    const auto settings = SchedulerSettings::from(ctx.kv);
    for (const auto& [name, clip] : load_inputs(ctx)) {
        const auto sched = schedule(clip, settings.bind(clip.fps()));
        ScheduleRows rows{name, {}, {}};
        for (const auto& e : sched.entries) {
            rows.frames.push_back(e.frames);
            rows.ratios.push_back(e.down_ratio);
        }
        out.push_back(std::move(rows));
    }
    return out;
}

void cmd_rope(const Context& ctx) {
    const std::size_t dim = size_or(ctx.kv, "dim", 16);
    std::vector<double> durations;
    if (auto d = ctx.kv.get_doubles("durations")) {
        durations = *d;
    } else {
        for (const auto& s : schedules_of(ctx)) {
            const auto part = token_durations(s.frames, s.ratios);
            durations.insert(durations.end(), part.begin(), part.end());
        }
    }
    require(!durations.empty(), ErrorKind::config, "no tokens to position");
    const auto table = rope_table(durations, dim);

    Table t({"token", "position", "duration", "pair", "theta", "cos", "sin"});
    for (std::size_t m = 0; m < table.rows(); ++m)
        for (std::size_t i = 0; i < table.half(); ++i)
            t.add({ll(m), table.positions[m], durations[m], ll(i), table.theta[i],
                   table.cos_at(m, i), table.sin_at(m, i)});
    emit(t, ctx);
}

std::vector<SpeedupObservation> parse_observations(const std::string& text) {
    std::vector<SpeedupObservation> obs;
    std::size_t start = 0;
    while (start < text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(start, comma - start);
        const auto colon = item.find(':');
        require(colon != std::string::npos, ErrorKind::config,
                "calibration points are ratio:speedup pairs, got '" + item + "'");
        obs.push_back({parse_double(item.substr(0, colon), "calibrate"),
                       parse_double(item.substr(colon + 1), "calibrate")});
        start = comma + 1;
    }
    return obs;
}

void cmd_speedup(const Context& ctx) {
    const std::size_t spatial = size_or(ctx.kv, "spatial_tokens", 1);
    const std::size_t base_ratio = size_or(ctx.kv, "base_ratio", 1);
    require(spatial >= 1 && base_ratio >= 1, ErrorKind::config,
            "spatial_tokens and base_ratio must be positive");
    double alpha = double_or(ctx.kv, "alpha", 1.0);
    if (auto c = ctx.kv.get("calibrate"); c && !c->empty())
        alpha = calibrate_quad_fraction(parse_observations(*c));
    require(alpha >= 0.0 && alpha <= 1.0, ErrorKind::config, "alpha must lie in [0, 1]");

    Table t({"schedule", "frames", "tokens_base", "tokens_dlfr", "token_ratio", "alpha",
             "speedup"});
    for (const auto& s : schedules_of(ctx)) {
        std::size_t frames = 0, base = 0, dyn = 0;
        for (std::size_t i = 0; i < s.frames.size(); ++i) {
            frames += s.frames[i];
            base += (s.frames[i] + base_ratio - 1) / base_ratio * spatial;
            dyn += (s.frames[i] + s.ratios[i] - 1) / s.ratios[i] * spatial;
        }
        const auto est = estimate_cost(base, dyn, alpha);
        t.add({s.name, ll(frames), ll(est.tokens_base), ll(est.tokens_dlfr),
               static_cast<double>(dyn) / static_cast<double>(base), alpha, est.speedup});
    }
    emit(t, ctx);
}

void cmd_synth(const Context& ctx) {
    const std::string output = required(ctx.kv, "output");
    const std::string kind = get_or(ctx.kv, "kind", "sine");
    const CorpusShape shape = corpus_shape(ctx.kv);
    Table t({"name", "path", "frames", "width", "height", "fps"});
    auto report = [&](const std::string& name, const std::string& path, const Clip& c) {
        t.add({name, path, ll(c.size()), ll(c.width()), ll(c.height()), c.fps()});
    };

    if (kind == "mixed" || kind == "graded") {
        Context sub = ctx;
        sub.inputs.clear();
        sub.kv.set("corpus", kind);
        const auto corpus = corpus_of(sub, kind, 10, 10);
        std::error_code ec;
        fs::create_directories(output, ec);
        require(!ec, ErrorKind::io, "cannot create " + output + ": " + ec.message());
        for (const auto& c : corpus) {
            const auto path = (fs::path(output) / (c.name + ".raw")).string();
            save_clip(path, c.clip);
            report(c.name, path, c.clip);
        }
    } else {
        Clip clip = [&] {
            if (kind == "sine")
                return synth_sine(double_or(ctx.kv, "freq", 2.0), shape.fps, shape.frames,
                                  shape.width, shape.height, double_or(ctx.kv, "amp", 64.0),
                                  double_or(ctx.kv, "mean", 88.0));
            if (kind == "checker" || kind == "gradient")
                return synth_translate(kind == "checker" ? Pattern::checker : Pattern::gradient,
                                       double_or(ctx.kv, "velocity", 1.0), shape.fps,
                                       shape.frames, shape.width, shape.height,
                                       size_or(ctx.kv, "cell", 8));
            fail(ErrorKind::config,
                 "unknown synth kind '" + kind + "' (sine, checker, gradient, mixed, graded)");
        }();
        save_clip(output, clip, parse_clip_format(get_or(ctx.kv, "clip_format", "raw")));
        report(clip_name(output), output, clip);
    }
    emit(t, ctx);
}

// --- option wiring ------------------------------------------------------------

void add_common(CLI::App* app, KeyedOptions& ko) {
    ko.add(app, "--format", "format", "Report format: csv or jsonl");
    ko.add(app, "--report", "report", "Write the report to this file instead of stdout");
    ko.add(app, "--seed", "seed", "Seed for linear stages and generated corpora (default 0)");
}

void add_scheduler(CLI::App* app, KeyedOptions& ko) {
    ko.add(app, "--classes", "classes", "Rate classes as latent rates in Hz, e.g. 1,2,4");
    ko.add(app, "--thresholds", "thresholds", "Ascending complexity thresholds, e.g. 0.05,0.15");
    ko.add(app, "--smoothing", "smoothing", "Limit neighbouring class jumps to one (true/false)");
    ko.add(app, "--segment-len", "segment_len", "Frames per segment (default: one second)");
}

void add_codec(CLI::App* app, KeyedOptions& ko) {
    ko.add(app, "--pipeline", "pipeline", "Pipeline descriptor (default: slot)");
    ko.add(app, "--placement", "placement", "Active slots, e.g. e0,1/d0,1 (default: all)");
    ko.add(app, "--down", "down", "Downsampling: drop, average or linear");
    ko.add(app, "--up", "up", "Upsampling: nearest or linear");
}

void add_corpus(CLI::App* app, KeyedOptions& ko) {
    ko.add(app, "--corpus", "corpus", "Generated corpus when no --input: mixed or graded");
    ko.add(app, "--still", "still", "Motionless clips in a mixed corpus");
    ko.add(app, "--moving", "moving", "Moving clips in a mixed corpus");
    ko.add(app, "--velocities", "velocities", "Velocities of a graded corpus, px/frame");
    ko.add(app, "--fps", "fps", "Frame rate of generated clips");
    ko.add(app, "--frames", "frames", "Frames per generated clip");
    ko.add(app, "--width", "width", "Width of generated clips");
    ko.add(app, "--height", "height", "Height of generated clips");
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::parameter:
        case ErrorKind::dimension:
        case ErrorKind::config: return 2;
        case ErrorKind::io: return 3;
        case ErrorKind::format:
        case ErrorKind::magic:
        case ErrorKind::version:
        case ErrorKind::truncated:
        case ErrorKind::checksum: return 4;
    }
    return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app("Dynamic latent frame rate toolkit", "dlfr");
    app.require_subcommand(1);
    std::string config_path;
    Context ctx;
    ctx.out = &out;
    KeyedOptions ko;
    std::function<void(const Context&)> action;

    auto sub = [&](const char* name, const char* help, void (*fn)(const Context&)) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "key = value settings file");
        add_common(s, ko);
        s->callback([&action, fn] { action = fn; });
        return s;
    };
    auto add_inputs = [&](CLI::App* s) {
        s->add_option("-i,--input", ctx.inputs, "Input clip(s): raw file or image directory");
    };

    auto* analyze = sub("analyze", "Per-segment complexity, spectrum and class", cmd_analyze);
    add_inputs(analyze);
    add_scheduler(analyze, ko);
    ko.add(analyze, "--epsilon", "epsilon", "Spectral magnitude threshold (default 1.8)");
    ko.add(analyze, "--stride", "stride", "Pixel grid stride for temporal traces (default 8)");

    auto* enc = sub("encode", "Encode a clip into a latent stream", cmd_encode);
    add_inputs(enc);
    add_scheduler(enc, ko);
    add_codec(enc, ko);
    ko.add(enc, "-o,--output", "output", "Latent stream file");
    ko.add(enc, "--rate", "rate", "Encode every segment at this latent rate instead");

    auto* dec = sub("decode", "Decode a latent stream into a clip", cmd_decode);
    add_inputs(dec);
    ko.add(dec, "-o,--output", "output", "Output clip path");
    ko.add(dec, "--clip-format", "clip_format", "raw or dir");

    auto* ev = sub("eval", "Dynamic vs matched static roundtrip quality", cmd_eval);
    add_inputs(ev);
    add_scheduler(ev, ko);
    add_codec(ev, ko);
    add_corpus(ev, ko);

    auto* sw = sub("sweep", "Threshold grid sweep with its non-dominated frontier", cmd_sweep);
    add_inputs(sw);
    add_scheduler(sw, ko);
    add_codec(sw, ko);
    add_corpus(sw, ko);
    ko.add(sw, "--grid", "grid", "Candidate threshold values");

    auto* sp = sub("search-placement", "Exhaustive resampling slot placement search", cmd_search);
    add_inputs(sp);
    add_codec(sp, ko);
    add_corpus(sp, ko);
    ko.add(sp, "--rate", "rate", "Latent rate to search at (default fps/4)");

    auto* rp = sub("rope", "Resampled RoPE cos/sin tables", cmd_rope);
    add_inputs(rp);
    add_scheduler(rp, ko);
    ko.add(rp, "--schedule", "schedule", "Schedule table written by analyze");
    ko.add(rp, "--durations", "durations", "Token durations in source frames");
    ko.add(rp, "--dim", "dim", "Embedding dimension (default 16)");

    auto* su = sub("speedup", "Token counts and estimated step speedup", cmd_speedup);
    add_inputs(su);
    add_scheduler(su, ko);
    ko.add(su, "--schedule", "schedule", "Schedule table written by analyze");
    ko.add(su, "--spatial-tokens", "spatial_tokens", "Tokens per latent frame (default 1)");
    ko.add(su, "--base-ratio", "base_ratio", "Temporal ratio of the baseline (default 1)");
    ko.add(su, "--alpha", "alpha", "Quadratic cost fraction (default 1)");
    ko.add(su, "--calibrate", "calibrate", "Fit alpha to ratio:speedup pairs");

    auto* sy = sub("synth", "Write synthetic clips", cmd_synth);
    add_corpus(sy, ko);
    ko.add(sy, "-o,--output", "output", "Output clip path, or directory for a corpus");
    ko.add(sy, "--kind", "kind", "sine, checker, gradient, mixed or graded");
    ko.add(sy, "--freq", "freq", "Sine frequency in Hz");
    ko.add(sy, "--amp", "amp", "Sine amplitude");
    ko.add(sy, "--mean", "mean", "Sine mean luma");
    ko.add(sy, "--velocity", "velocity", "Translation speed, px/frame");
    ko.add(sy, "--cell", "cell", "Checker cell size");
    ko.add(sy, "--clip-format", "clip_format", "raw or dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return 2;
    }

    try {
        if (!config_path.empty()) ctx.kv = KeyValues::load(config_path);
        ko.apply(ctx.kv);
        action(ctx);
    } catch (const Error& e) {
        err << "dlfr: " << to_string(e.kind()) << " error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "dlfr: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace dlfr::cli
