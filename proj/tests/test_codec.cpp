#include "dlfr/codec.hpp"
#include "dlfr/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dlfr;
using oracle::thrown_kind;

namespace {

Clip join(const Clip& a, const Clip& b) {
    std::vector<Frame> f = a.frames();
    f.insert(f.end(), b.frames().begin(), b.frames().end());
    return Clip(a.fps(), std::move(f));
}

Clip random_clip(std::mt19937_64& rng, double fps, std::size_t n, std::size_t w, std::size_t h) {
    std::vector<Frame> f;
    for (std::size_t i = 0; i < n; ++i) f.push_back(oracle::random_frame(rng, w, h));
    return Clip(fps, std::move(f));
}

/// Schedule with random classes per segment, no smoothing.
RateSchedule random_schedule(std::mt19937_64& rng, std::size_t frames, double fps,
                             std::size_t seg, std::vector<double> rates) {
    auto s = uniform_schedule(frames, fps, seg, rates.front());
    s.classes = make_rate_classes(fps, rates);
    std::uniform_int_distribution<std::size_t> pick(0, s.classes.size() - 1);
    for (auto& e : s.entries) {
        const auto& c = s.classes[pick(rng)];
        e.class_ordinal = c.ordinal;
        e.latent_rate = c.latent_rate;
        e.down_ratio = c.down_ratio;
    }
    return s;
}

}  // namespace

TEST_CASE("identity pipeline at the source rate is lossless") {
    std::mt19937_64 rng(61);
    const Clip c = random_clip(rng, 16, 21, 12, 10);
    const auto sched = uniform_schedule(c.size(), 16, 16, 16);
    const auto stream = encode(c, sched, Pipeline::identity());
    REQUIRE(stream.segments.size() == 2);
    for (std::size_t i = 0; i < 16 * 12 * 10; ++i)
        CHECK(stream.segments[0].data[i] == float(c.frames()[i / 120].luma()[i % 120]));
    CHECK(stream_compression_ratio(stream) == 1.0);

    const Clip q = quantize(c);
    for (const char* desc : {"slot", "id,slot", "slot,id,slot"})
        CHECK(roundtrip(q, sched, Pipeline::parse(desc)) == q);
}

TEST_CASE("latent steps follow the segment rate") {
    const Clip one = synth_translate(Pattern::checker, 1, 16, 16, 16, 16);
    const auto s = encode(one, uniform_schedule(16, 16, 16, 4), Pipeline::identity());
    REQUIRE(s.segments.size() == 1);
    CHECK(s.segments[0].steps == 4);
    CHECK(s.segments[0].latent_rate == 4.0f);

    SchedulerConfig cfg;
    cfg.source_fps = 16;
    const double rates[] = {1, 4};
    cfg.classes = make_rate_classes(16, rates);
    cfg.thresholds = {0.05};
    cfg.segment_len = 16;
    const Clip two = join(synth_translate(Pattern::checker, 3, 16, 16, 16, 16),
                          synth_translate(Pattern::checker, 0, 16, 16, 16, 16));
    const auto st = encode(two, schedule(two, cfg), Pipeline::identity());
    REQUIRE(st.segments.size() == 2);
    CHECK(st.segments[0].steps == 4);
    CHECK(st.segments[1].steps == 1);
    CHECK(stream_compression_ratio(st) == doctest::Approx(32.0 / 5));
    CHECK(st.classes == std::vector<ClassTableEntry>{{0.5f, 16}, {2.0f, 4}});
}

TEST_CASE("decoding restores the frame count") {
    std::mt19937_64 rng(62);
    for (const char* desc : {"slot", "slot,pool:2,slot", "slot,linear:2:3,slot,pool:2",
                             "slot,linear:2:3:tanh,slot=>slot,linear:2:3:tanh"}) {
        const auto p = Pipeline::parse(desc);
        for (std::size_t n : {1u, 5u, 16u, 33u, 50u}) {
            const Clip c = random_clip(rng, 16, n, 8, 4);
            const auto sched = random_schedule(rng, n, 16, 8, {2, 4, 8, 16});
            for (auto down : {DownMethod::drop, DownMethod::average, DownMethod::linear}) {
                CodecOptions opt;
                opt.down = down;
                const Clip out = roundtrip(c, sched, p, opt);
                CHECK(out.size() == n);
                CHECK(out.fps() == 16);
                CHECK(out.width() == 8);
            }
        }
    }
}

TEST_CASE("static content survives any schedule exactly") {
    std::mt19937_64 rng(63);
    const Frame f = quantize(oracle::random_frame(rng, 8, 8));
    const Clip still(16, std::vector<Frame>(37, f));
    for (const char* desc : {"slot", "slot,id,slot"}) {
        for (int trial = 0; trial < 3; ++trial) {
            const auto sched = random_schedule(rng, still.size(), 16, 16, {1, 2, 4, 16});
            for (auto down : {DownMethod::drop, DownMethod::average, DownMethod::linear})
                for (auto up : {UpMethod::nearest, UpMethod::linear}) {
                    const CodecOptions opt{down, up, std::nullopt};
                    CHECK(roundtrip(still, sched, Pipeline::parse(desc), opt) == still);
                }
        }
    }
}

TEST_CASE("stream descriptor") {
    StreamDescriptor d;
    d.pipeline = "slot,pool:2=>pool:2,slot";
    d.placement = {{0}, {0}};
    d.total_frames = 48;
    d.width = 32;
    d.height = 24;
    d.down = DownMethod::average;
    d.up = UpMethod::nearest;
    CHECK(StreamDescriptor::parse(d.to_string()) == d);
    CHECK(thrown_kind([] { StreamDescriptor::parse("pipeline=slot"); }) == ErrorKind::format);
    CHECK(thrown_kind([] { StreamDescriptor::parse("garbage"); }) == ErrorKind::format);
}

TEST_CASE("decoding checks the header") {
    const Clip c = synth_translate(Pattern::checker, 1, 16, 32, 16, 16);
    const auto sched = uniform_schedule(32, 16, 16, 4);
    const auto stream = encode(c, sched, Pipeline::parse("slot,pool:2"));
    CHECK(decode(stream, Pipeline::parse("slot,pool:2")) == decode(stream));
    CHECK(thrown_kind([&] { decode(stream, Pipeline::identity()); }) == ErrorKind::format);

    auto bad = stream;
    bad.segments.pop_back();
    CHECK(thrown_kind([&] { decode(bad); }) == ErrorKind::format);
    bad = stream;
    bad.segments[1].latent_rate = 3.0f;
    CHECK(thrown_kind([&] { decode(bad); }) == ErrorKind::format);
    bad = stream;
    bad.segments[0].data.pop_back();
    CHECK(thrown_kind([&] { decode(bad); }) == ErrorKind::format);
    bad = stream;
    bad.descriptor = "nonsense";
    CHECK(thrown_kind([&] { decode(bad); }) == ErrorKind::format);

    CHECK(thrown_kind([&] { encode(c, uniform_schedule(31, 16, 16, 4), Pipeline::identity()); }) ==
          ErrorKind::parameter);
    CHECK(thrown_kind([&] { encode(c, uniform_schedule(32, 16, 16, 8), Pipeline::parse("id")); }) ==
          ErrorKind::parameter);
}

TEST_CASE("placement enumeration") {
    const auto three_one = Pipeline::parse("slot,id,slot,id,slot => id,id,slot");
    CHECK(slots_needed(three_one, 2) == 1);
    const auto e = enumerate_placements(three_one, 2);
    REQUIRE(e.size() == 3);
    CHECK(e[0] == Placement{{0}, {0}});
    CHECK(e[2] == Placement{{2}, {0}});

    const auto three = Pipeline::parse("slot,slot,slot");
    CHECK(enumerate_placements(three, 4).size() == 9);
    CHECK(enumerate_placements(three, 8).size() == 1);
    CHECK(enumerate_placements(three, 16).size() == 1);
    CHECK(enumerate_placements(three, 3).size() == 9);
    CHECK(enumerate_placements(three, 1).size() == 1);
    CHECK(enumerate_placements(three, 1)[0] == Placement{});
    CHECK(thrown_kind([] { enumerate_placements(Pipeline::parse("id"), 2); }) ==
          ErrorKind::parameter);
}

TEST_CASE("placement search") {
    std::vector<Clip> corpus;
    corpus.push_back(synth_translate(Pattern::checker, 1.5, 16, 32, 16, 16));
    corpus.push_back(synth_translate(Pattern::gradient, 2, 16, 32, 16, 16));

    const auto ties = search_placement(Pipeline::parse("slot,id,slot,id,slot"), corpus, 8);
    REQUIRE(ties.table.size() == 9);
    for (const auto& row : ties.table) CHECK(row.mean_ssim == ties.table[0].mean_ssim);
    CHECK(ties.best == 0);
    CHECK(ties.best_score().placement == Placement{{0}, {0}});

    const auto lossy = Pipeline::parse("slot,linear:2:7:tanh,slot");
    const auto r = search_placement(lossy, corpus, 8, DownMethod::average);
    REQUIRE(r.table.size() == 4);
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        CHECK(r.table[i].mean_ssim <= r.best_score().mean_ssim);
        if (i < r.best) CHECK(r.table[i].mean_ssim < r.best_score().mean_ssim);
        const auto single = evaluate_placement(lossy, r.table[i].placement, corpus, 8,
                                               DownMethod::average);
        CHECK(single.mean_ssim == r.table[i].mean_ssim);
    }
    CHECK(r.table[0].mean_ssim != r.table[2].mean_ssim);

    std::vector<Clip> mixed_rates{corpus[0], Clip(8, corpus[0].frames())};
    CHECK(thrown_kind([&] { search_placement(lossy, mixed_rates, 8); }) == ErrorKind::parameter);
    CHECK(thrown_kind([&] { search_placement(lossy, std::span<const Clip>(), 8); }) ==
          ErrorKind::parameter);
}
