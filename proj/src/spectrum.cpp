#include "dlfr/spectrum.hpp"

#include "dlfr/error.hpp"
#include "dlfr/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace dlfr {
namespace {

struct DftBasis {
    std::size_t length;
    std::vector<std::vector<double>> cos_rows;
    std::vector<std::vector<double>> sin_rows;
};

DftBasis make_basis(std::size_t length) {
    DftBasis basis{length, {}, {}};
    const std::size_t bins = length / 2 + 1;
    basis.cos_rows.assign(bins, std::vector<double>(length));
    basis.sin_rows.assign(bins, std::vector<double>(length));
    for (std::size_t k = 0; k < bins; ++k) {
        for (std::size_t n = 0; n < length; ++n) {
            // k*n reduced mod L.
            const double angle = 2.0 * std::numbers::pi *
                                 static_cast<double>((k * n) % length) /
                                 static_cast<double>(length);
            basis.cos_rows[k][n] = std::cos(angle);
            basis.sin_rows[k][n] = std::sin(angle);
        }
    }
    return basis;
}

const DftBasis& basis_for(std::size_t length) {
    static std::mutex mu;
    static std::map<std::size_t, DftBasis> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(length);
    if (it == cache.end()) it = cache.emplace(length, make_basis(length)).first;
    return it->second;
}

void remove_mean(Trace& t) {
    if (t.empty()) return;
    const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
    for (double& v : t) v -= mean;
}

}  // namespace

std::vector<Trace> temporal_signal(std::span<const Frame> frames, std::size_t grid_stride) {
    require(grid_stride >= 1, ErrorKind::parameter, "grid stride must be >= 1");
    require(!frames.empty(), ErrorKind::parameter, "empty segment");

    const std::size_t w = frames[0].width();
    const std::size_t h = frames[0].height();
    std::vector<Trace> traces;
    for (std::size_t y = 0; y < h; y += grid_stride) {
        for (std::size_t x = 0; x < w; x += grid_stride) {
            Trace t(frames.size());
            for (std::size_t n = 0; n < frames.size(); ++n) t[n] = frames[n].at(x, y);
            remove_mean(t);
            traces.push_back(std::move(t));
        }
    }
    return traces;
}

std::vector<Trace> temporal_signal(const Segment& segment, std::size_t grid_stride) {
    return temporal_signal(std::span<const Frame>(segment.frames), grid_stride);
}

SpectrumReport dft_magnitude(std::span<const Trace> traces, double fps) {
    require(fps > 0.0, ErrorKind::parameter, "fps must be positive");
    require(!traces.empty(), ErrorKind::parameter, "no traces to transform");
    const std::size_t length = traces[0].size();
    require(length >= 2, ErrorKind::parameter, "traces need at least 2 samples");
    for (const Trace& t : traces)
        require(t.size() == length, ErrorKind::dimension, "ragged traces");

    const DftBasis& basis = basis_for(length);
    const std::size_t bins = length / 2 + 1;
    const double L = static_cast<double>(length);

    SpectrumReport rep;
    rep.fps = fps;
    rep.window = length;
    rep.bin_freqs.resize(bins);
    rep.magnitudes.assign(bins, 0.0);
    for (std::size_t k = 0; k < bins; ++k) rep.bin_freqs[k] = static_cast<double>(k) * fps / L;

    for (const Trace& t : traces) {
        for (std::size_t k = 0; k < bins; ++k) {
            const double re = kernels::dot(t, basis.cos_rows[k]);
            const double im = kernels::dot(t, basis.sin_rows[k]);
            const bool edge = k == 0 || (length % 2 == 0 && k == length / 2);
            rep.magnitudes[k] += std::hypot(re, im) * (edge ? 1.0 : 2.0) / L;
        }
    }
    for (double& m : rep.magnitudes) m /= static_cast<double>(traces.size());
    return rep;
}

std::optional<double> effective_frequency(const SpectrumReport& spec, double epsilon) {
    require(epsilon > 0.0, ErrorKind::parameter, "epsilon must be positive");
    for (std::size_t k = spec.bins(); k-- > 1;) {
        if (spec.magnitudes[k] >= epsilon) return spec.bin_freqs[k];
    }
    return std::nullopt;
}

SpectrumReport with_threshold(SpectrumReport spec, double epsilon) {
    spec.f_eff = effective_frequency(spec, epsilon);
    spec.epsilon = epsilon;
    return spec;
}

std::optional<double> dominant_frequency(const SpectrumReport& spec, double floor) {
    std::optional<double> best;
    double best_mag = floor;
    for (std::size_t k = 1; k < spec.bins(); ++k) {
        if (spec.magnitudes[k] > best_mag) {
            best_mag = spec.magnitudes[k];
            best = spec.bin_freqs[k];
        }
    }
    return best;
}

double required_rate(std::optional<double> f_eff, double min_rate) {
    if (!f_eff) return min_rate;
    require(*f_eff >= 0.0, ErrorKind::parameter, "effective frequency must be >= 0");
    return *f_eff > 0.0 ? 2.0 * *f_eff : min_rate;
}

SpectrumReport latent_spectrum(const LatentSegment& latent) {
    require(latent.steps >= 2, ErrorKind::parameter,
            "latent spectrum needs at least 2 temporal steps");
    const std::size_t plane = latent.plane_size();
    std::vector<Trace> traces(latent.channels, Trace(latent.steps));
    for (std::size_t c = 0; c < latent.channels; ++c) {
        for (std::size_t t = 0; t < latent.steps; ++t) {
            const float* p = latent.data.data() + (t * latent.channels + c) * plane;
            double sum = 0.0;
            for (std::size_t i = 0; i < plane; ++i) sum += p[i];
            traces[c][t] = sum / static_cast<double>(plane);
        }
        remove_mean(traces[c]);
    }
    return dft_magnitude(traces, latent.latent_rate);
}

SpectrumReport clip_spectrum(const Clip& clip, std::size_t grid_stride) {
    const auto traces = temporal_signal(std::span<const Frame>(clip.frames()), grid_stride);
    return dft_magnitude(traces, clip.fps());
}

}  // namespace dlfr
