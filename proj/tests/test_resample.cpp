#include "dlfr/error.hpp"
#include "dlfr/resample.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dlfr;

namespace {

FeatureVolume series(std::vector<double> v) {
    FeatureVolume f(v.size(), 1, 1, 1);
    f.data = std::move(v);
    return f;
}

FeatureVolume random_volume(std::mt19937_64& rng, std::size_t t) {
    FeatureVolume f(t, 2, 3, 4);
    f.data = oracle::random_vector(rng, f.data.size(), -5, 5);
    return f;
}

FeatureVolume constant_volume(std::size_t t, double c) {
    FeatureVolume f(t, 2, 3, 4);
    for (double& v : f.data) v = c;
    return f;
}

}  // namespace

TEST_CASE("downsample examples") {
    const auto abcd = series({1, 7, 3, 9});
    CHECK(downsample_by(abcd, 2, DownMethod::drop).data == std::vector<double>{1, 3});
    CHECK(downsample_by(series({0, 2, 4, 6}), 2, DownMethod::average).data ==
          std::vector<double>{1, 5});
    CHECK(downsample_by(series({0, 2, 4}), 2, DownMethod::average).data ==
          std::vector<double>{1, 4});
    CHECK(downsample_by(series({0, 2, 4, 6}), 2, DownMethod::linear).data ==
          std::vector<double>{1, 5});
    CHECK(downsample_by(series({0, 3, 6, 9, 12}), 3, DownMethod::linear).data ==
          std::vector<double>{3, 12});
    CHECK(downsample_by(series({0, 1, 2, 3, 4}), 2, DownMethod::drop).steps == 3);
}

TEST_CASE("upsample examples") {
    CHECK(upsample_by(series({4, 9}), 2, UpMethod::nearest).data == std::vector<double>{4, 4, 9, 9});
    CHECK(upsample_by(series({0, 2}), 2, UpMethod::linear).data == std::vector<double>{0, 1, 2, 2});
    CHECK(upsample_by(series({0, 4, 8}), 4, UpMethod::linear).data ==
          std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 8, 8, 8});
}

TEST_CASE("rate-based resampling") {
    const auto v = series({1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(downsample(v, 16, 4, DownMethod::drop) == downsample_by(v, 4, DownMethod::drop));
    CHECK(upsample(v, 4, 16, UpMethod::linear) == upsample_by(v, 4, UpMethod::linear));
    CHECK_THROWS_AS(downsample(v, 16, 5, DownMethod::drop), Error);
    CHECK_THROWS_AS(upsample(v, 5, 16, UpMethod::nearest), Error);
    CHECK_THROWS_AS(downsample_by(v, 0, DownMethod::drop), Error);
    CHECK_THROWS_AS(upsample_by(v, 0, UpMethod::nearest), Error);
}

TEST_CASE("stride one is the identity") {
    std::mt19937_64 rng(41);
    for (std::size_t t : {1u, 2u, 7u}) {
        const auto v = random_volume(rng, t);
        for (auto m : {DownMethod::drop, DownMethod::average, DownMethod::linear})
            CHECK(downsample_by(v, 1, m) == v);
        for (auto m : {UpMethod::nearest, UpMethod::linear}) CHECK(upsample_by(v, 1, m) == v);
    }
}

TEST_CASE("resampling preserves constants") {
    for (std::size_t t : {1u, 3u, 8u, 13u})
        for (std::size_t s : {2u, 3u, 4u, 16u})
            for (double c : {0.0, 17.25, 255.0}) {
                const auto v = constant_volume(t, c);
                for (auto m : {DownMethod::drop, DownMethod::average, DownMethod::linear}) {
                    const auto d = downsample_by(v, s, m);
                    CHECK(d.steps == (t + s - 1) / s);
                    for (double x : d.data) CHECK(x == c);
                }
                for (auto m : {UpMethod::nearest, UpMethod::linear}) {
                    const auto u = upsample_by(v, s, m);
                    CHECK(u.steps == t * s);
                    for (double x : u.data) CHECK(x == c);
                }
            }
}

TEST_CASE("nearest upsample after drop is idempotent") {
    std::mt19937_64 rng(42);
    for (std::size_t s : {2u, 3u, 4u}) {
        const auto v = random_volume(rng, 4 * s);
        const auto once = upsample_by(downsample_by(v, s, DownMethod::drop), s, UpMethod::nearest);
        const auto twice =
            upsample_by(downsample_by(once, s, DownMethod::drop), s, UpMethod::nearest);
        CHECK(once == twice);
    }
}

TEST_CASE("method names") {
    CHECK(parse_down_method("average") == DownMethod::average);
    CHECK(parse_up_method("nearest") == UpMethod::nearest);
    CHECK(to_string(DownMethod::linear) == "linear");
    CHECK(to_string(UpMethod::linear) == "linear");
    CHECK_THROWS_AS(parse_down_method("cubic"), Error);
    CHECK_THROWS_AS(parse_up_method("drop"), Error);
}

TEST_CASE("frames to features and back") {
    const Clip c = synth_translate(Pattern::gradient, 1, 8, 3, 10, 6);
    const auto vol = to_features(std::span<const Frame>(c.frames()));
    CHECK(vol.steps == 3);
    CHECK(vol.channels == 1);
    CHECK(vol.height == 6);
    CHECK(vol.width == 10);
    CHECK(to_frames(vol) == c.frames());

    FeatureVolume wild(1, 1, 1, 3);
    wild.data = {-4, 100, 300};
    const auto f = to_frames(wild);
    CHECK(f[0].luma()[0] == 0.0);
    CHECK(f[0].luma()[1] == 100.0);
    CHECK(f[0].luma()[2] == 255.0);
}
