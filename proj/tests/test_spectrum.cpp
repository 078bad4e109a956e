#include "dlfr/codec.hpp"
#include "dlfr/error.hpp"
#include "dlfr/resample.hpp"
#include "dlfr/spectrum.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dlfr;

namespace {

Trace tone(double amp, std::size_t k0, std::size_t L, double phase = 0.0) {
    Trace t(L);
    for (std::size_t n = 0; n < L; ++n)
        t[n] = amp * std::sin(2 * std::numbers::pi * double(k0 * n) / double(L) + phase);
    return t;
}

LatentSegment latent_of(const Clip& clip, const Pipeline& p) {
    const auto sched = uniform_schedule(clip.size(), clip.fps(), clip.size(), clip.fps());
    return encode(clip, sched, p).segments.at(0);
}

}  // namespace

TEST_CASE("temporal_signal removes the mean on a strided grid") {
    const Clip flat(16, std::vector<Frame>(8, Frame::filled(10, 6, 77)));
    const auto z = temporal_signal(std::span<const Frame>(flat.frames()), 4);
    CHECK(z.size() == 3 * 2);
    for (const auto& t : z)
        for (double v : t) CHECK(v == 0.0);

    const Clip s = synth_sine(2, 16, 16, 9, 9, 50, 100);
    const auto traces = temporal_signal(std::span<const Frame>(s.frames()), 9);
    REQUIRE(traces.size() == 1);
    for (std::size_t n = 0; n < 16; ++n)
        CHECK(traces[0][n] == doctest::Approx(50 * std::sin(2 * M_PI * 2 * double(n) / 16)).epsilon(1e-12));

    CHECK(temporal_signal(std::span<const Frame>(s.frames()), 1).size() == 81);
    CHECK_THROWS_AS(temporal_signal(std::span<const Frame>(s.frames()), 0), Error);
    CHECK_THROWS_AS(temporal_signal(std::span<const Frame>(), 1), Error);
}

TEST_CASE("dft_magnitude matches frozen values and the complex oracle") {
    const std::vector<Trace> t8{{3, 1, 4, 1, 5, 9, 2, 6}};
    const auto s8 = dft_magnitude(t8, 8);
    const double want8[] = {3.875, 2.0723737710735559, 0.90138781886599739, 2.7982614161236556,
                            0.375};
    REQUIRE(s8.bins() == 5);
    for (int k = 0; k < 5; ++k) CHECK(s8.magnitudes[k] == doctest::Approx(want8[k]).epsilon(1e-12));
    CHECK(s8.bin_freqs[4] == 4.0);

    const std::vector<Trace> t7{{3, 1, 4, 1, 5, 9, 2}};
    const auto s7 = dft_magnitude(t7, 7);
    const double want7[] = {3.5714285714285716, 2.3280671079163482, 2.0299571467719146,
                            2.0228768090351239};
    REQUIRE(s7.bins() == 4);
    for (int k = 0; k < 4; ++k) CHECK(s7.magnitudes[k] == doctest::Approx(want7[k]).epsilon(1e-12));

    std::mt19937_64 rng(21);
    for (std::size_t L : {2u, 3u, 5u, 16u, 17u, 30u}) {
        std::vector<Trace> traces;
        for (int i = 0; i < 3; ++i) traces.push_back(oracle::random_vector(rng, L, -50, 50));
        const auto spec = dft_magnitude(traces, 24);
        for (std::size_t k = 0; k < spec.bins(); ++k) {
            double want = 0;
            for (const auto& tr : traces) want += oracle::dft_amplitudes(tr)[k];
            CHECK(spec.magnitudes[k] == doctest::Approx(want / 3).epsilon(1e-10));
            CHECK(spec.bin_freqs[k] == doctest::Approx(double(k) * 24 / double(L)));
        }
    }
}

TEST_CASE("dft_magnitude examples") {
    const std::vector<Trace> zero{Trace(16, 0.0)};
    for (double m : dft_magnitude(zero, 16).magnitudes) CHECK(m == 0.0);

    const std::vector<Trace> one{tone(10, 3, 16)};
    const auto s = dft_magnitude(one, 16);
    for (std::size_t k = 0; k < s.bins(); ++k) {
        if (k == 3) CHECK(s.magnitudes[k] == doctest::Approx(10).epsilon(1e-12));
        else CHECK(s.magnitudes[k] <= 1e-9);
    }

    const std::vector<Trace> two{tone(4, 5, 16), tone(12, 5, 16, 0.3)};
    CHECK(dft_magnitude(two, 16).magnitudes[5] == doctest::Approx(8).epsilon(1e-12));

    const std::vector<Trace> ragged{Trace(4), Trace(5)};
    CHECK_THROWS_AS(dft_magnitude(ragged, 16), Error);
    const std::vector<Trace> shortt{Trace(1)};
    CHECK_THROWS_AS(dft_magnitude(shortt, 16), Error);
}

TEST_CASE("amplitude spectrum satisfies Parseval with one-sided scaling") {
    std::mt19937_64 rng(22);
    for (std::size_t L : {8u, 9u, 16u, 31u}) {
        auto x = oracle::random_vector(rng, L, -20, 20);
        double mean = 0;
        for (double v : x) mean += v;
        mean /= double(L);
        double energy = 0;
        for (double& v : x) {
            v -= mean;
            energy += v * v;
        }
        const std::vector<Trace> t{x};
        const auto m = dft_magnitude(t, 16).magnitudes;
        double sum = double(L) * m[0] * m[0];
        for (std::size_t k = 1; k < m.size(); ++k) {
            const bool nyquist = L % 2 == 0 && k == L / 2;
            sum += (nyquist ? double(L) : double(L) / 2) * m[k] * m[k];
        }
        CHECK(sum == doctest::Approx(energy).epsilon(1e-9));
    }
}

TEST_CASE("effective_frequency picks the highest qualifying bin") {
    const std::vector<Trace> t3{tone(10, 3, 16)};
    CHECK(effective_frequency(dft_magnitude(t3, 16), 1.8) == 3.0);

    Trace mix = tone(10, 2, 16);
    const Trace hi = tone(2, 5, 16);
    for (std::size_t i = 0; i < 16; ++i) mix[i] += hi[i];
    const std::vector<Trace> m{mix};
    const auto spec = dft_magnitude(m, 16);
    CHECK(effective_frequency(spec, 1.8) == 5.0);
    CHECK(effective_frequency(spec, 2.5) == 2.0);
    CHECK_FALSE(effective_frequency(spec, 11.0).has_value());
    CHECK_THROWS_AS(effective_frequency(spec, 0.0), Error);

    const auto w = with_threshold(spec, 1.8);
    CHECK(w.epsilon == 1.8);
    CHECK(w.f_eff == 5.0);

    const std::vector<Trace> dc{Trace(16, 100.0)};
    CHECK_FALSE(effective_frequency(dft_magnitude(dc, 16), 1e-3).has_value());
}

TEST_CASE("effective_frequency is monotone in epsilon") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<Trace> t{oracle::random_vector(rng, 20, -10, 10)};
        const auto spec = dft_magnitude(t, 20);
        double prev = std::numeric_limits<double>::infinity();
        for (double eps = 0.1; eps < 12; eps *= 1.5) {
            const double f = effective_frequency(spec, eps).value_or(-1.0);
            CHECK(f <= prev);
            prev = f;
        }
    }
}

TEST_CASE("required_rate doubles f_eff") {
    CHECK(required_rate(3.0, 1.0) == 6.0);
    CHECK(required_rate(7.5, 1.0) == 15.0);
    CHECK(required_rate(0.0, 1.0) == 1.0);
    CHECK(required_rate(std::nullopt, 2.0) == 2.0);
    CHECK_THROWS_AS(required_rate(-1.0, 1.0), Error);
}

TEST_CASE("dominant frequency") {
    Trace mix = tone(3, 2, 16);
    const Trace big = tone(9, 6, 16);
    for (std::size_t i = 0; i < 16; ++i) mix[i] += big[i];
    const std::vector<Trace> m{mix};
    CHECK(dominant_frequency(dft_magnitude(m, 16)) == 6.0);
    const std::vector<Trace> z{Trace(16, 0.0)};
    CHECK_FALSE(dominant_frequency(dft_magnitude(z, 16)).has_value());
}

TEST_CASE("integer-bin tones alias when decimated below twice their frequency") {
    for (int f = 1; f <= 7; ++f) {
        const Clip c = synth_sine(f, 16, 64, 4, 4, 60, 128);
        const auto full = clip_spectrum(c, 4);
        CHECK(dominant_frequency(full) == doctest::Approx(f));
        for (std::size_t s : {2u, 4u, 8u}) {
            const double rate = 16.0 / double(s);
            if (rate >= 2.0 * f) continue;
            std::vector<Frame> kept;
            for (std::size_t i = 0; i < c.size(); i += s) kept.push_back(c[i]);
            const auto spec = clip_spectrum(Clip(rate, kept), 4);
            const auto dom = dominant_frequency(spec, 1e-6);
            CHECK((!dom || std::abs(*dom - f) > 1e-9));
        }
    }
}

TEST_CASE("latent spectrum of identity and pooled encoders equals the pixel spectrum") {
    const Clip c = synth_sine(3, 16, 16, 8, 8, 40, 120);
    const auto pixel = clip_spectrum(c, 1);
    for (const char* desc : {"slot", "slot,pool:2", "pool:4,slot"}) {
        const auto lat = latent_spectrum(latent_of(c, Pipeline::parse(desc)));
        REQUIRE(lat.bins() == pixel.bins());
        CHECK(lat.fps == 16.0);
        for (std::size_t k = 0; k < lat.bins(); ++k)
            CHECK(std::abs(lat.magnitudes[k] - pixel.magnitudes[k]) <= 1e-4);
    }
    const Clip flat(16, std::vector<Frame>(8, Frame::filled(8, 8, 50)));
    for (double m : latent_spectrum(latent_of(flat, Pipeline::identity())).magnitudes)
        CHECK(m == 0.0);

    LatentSegment one;
    one.latent_rate = 4;
    one.steps = 1;
    one.channels = one.height = one.width = 1;
    one.data = {1.0f};
    CHECK_THROWS_AS(latent_spectrum(one), Error);
}
