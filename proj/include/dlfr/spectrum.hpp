#pragma once

#include "dlfr/latent.hpp"
#include "dlfr/video.hpp"

#include <optional>
#include <vector>

namespace dlfr {

using Trace = std::vector<double>;

/// One-sided amplitude spectrum of a set of equal-length temporal traces.
///
/// magnitudes[k] is the mean over traces of |X_k| scaled to the amplitude of
/// the corresponding sinusoid: 2/L for interior bins, 1/L for DC and (even L)
/// the Nyquist bin.
struct SpectrumReport {
    double fps = 0.0;
    std::size_t window = 0;  // trace length L
    std::vector<double> bin_freqs;
    std::vector<double> magnitudes;
    std::optional<double> epsilon;
    std::optional<double> f_eff;

    std::size_t bins() const noexcept { return magnitudes.size(); }
};

/// Mean-removed temporal traces on a stride-subsampled pixel grid
/// (x, y in {0, stride, 2*stride, ...}).
std::vector<Trace> temporal_signal(const Segment& segment, std::size_t grid_stride);

/// Same, for an arbitrary frame window.
std::vector<Trace> temporal_signal(std::span<const Frame> frames, std::size_t grid_stride);

/// Bins 0..floor(L/2); bin k sits at k*fps/L.
SpectrumReport dft_magnitude(std::span<const Trace> traces, double fps);

/// Highest non-DC bin frequency with magnitude >= epsilon; nullopt when the
/// segment is effectively static.
std::optional<double> effective_frequency(const SpectrumReport& spec, double epsilon);

/// Returns `spec` with epsilon and f_eff filled in.
SpectrumReport with_threshold(SpectrumReport spec, double epsilon);

/// Non-DC bin with the largest magnitude, or nullopt if every non-DC bin is
/// below `floor`.
std::optional<double> dominant_frequency(const SpectrumReport& spec, double floor = 1e-9);

/// Nyquist rate 2*f_eff; `min_rate` when f_eff is absent.
double required_rate(std::optional<double> f_eff, double min_rate);

/// Spectrum of per-channel spatially averaged latent traces at the latent rate.
SpectrumReport latent_spectrum(const LatentSegment& latent);

/// Convenience: temporal_signal + dft_magnitude for a whole clip.
SpectrumReport clip_spectrum(const Clip& clip, std::size_t grid_stride);

}  // namespace dlfr
