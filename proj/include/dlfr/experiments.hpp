#pragma once

// Corpus-level evaluation: synthetic corpora, dynamic vs matched static
// roundtrips, threshold sweeps and their non-dominated frontier.

#include "dlfr/codec.hpp"
#include "dlfr/scheduler.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dlfr {

struct NamedClip {
    std::string name;
    Clip clip;
};

struct CorpusShape {
    double fps = 24.0;
    std::size_t frames = 48;
    std::size_t width = 32;
    std::size_t height = 32;
};

/// `still` clips of motionless patterns followed by `moving` clips of
/// patterns translating at 1.5 to 4 px/frame. Pattern, cell size and speed
/// are drawn from `seed`.
std::vector<NamedClip> mixed_motion_corpus(std::size_t still, std::size_t moving,
                                           const CorpusShape& shape, std::uint64_t seed);

/// One checker and one gradient clip per velocity, for sweeps that need
/// complexities spread over the whole range.
std::vector<NamedClip> graded_motion_corpus(std::span<const double> velocities,
                                            const CorpusShape& shape);

/// Velocities used by graded_motion_corpus when none are given.
std::vector<double> default_sweep_velocities();

/// Integer ratio r whose uniform rate fps/r comes closest to compression
/// `cr` (by |1/r - 1/cr|, ties to the smaller r), capped at `max_ratio`.
std::size_t matched_static_ratio(double cr, std::size_t max_ratio);

struct EvalRow {
    std::string name;
    std::size_t frames = 0;
    double dynamic_cr = 1.0;
    double dynamic_ssim = 0.0;
    double dynamic_psnr = 0.0;
    double static_cr = 1.0;
    double static_ssim = 0.0;
    double static_psnr = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    double dynamic_cr = 1.0;  // corpus frames / corpus latent steps
    double static_cr = 1.0;
    double static_rate = 0.0;  // Hz
    double dynamic_mean_ssim = 0.0;
    double static_mean_ssim = 0.0;
    double dynamic_mean_psnr = 0.0;
    double static_mean_psnr = 0.0;
};

/// Schedules and roundtrips every clip, then repeats with the uniform rate
/// matching the corpus-level dynamic compression. All clips must share one
/// frame rate.
EvalReport roundtrip_eval(std::span<const NamedClip> corpus, const SchedulerSettings& settings,
                          const Pipeline& pipeline, const CodecOptions& options = {});

struct SweepPoint {
    std::vector<double> thresholds;
    double compression_ratio = 1.0;
    double mean_ssim = 0.0;
};

/// Every strictly ascending choice of `count` values from `values`.
std::vector<std::vector<double>> threshold_grid(std::span<const double> values, std::size_t count);

/// One point per grid cell, in grid order.
std::vector<SweepPoint> threshold_sweep(std::span<const NamedClip> corpus,
                                        const SchedulerSettings& settings,
                                        std::span<const std::vector<double>> grid,
                                        const Pipeline& pipeline, const CodecOptions& options = {});

/// Indices of the points no other point beats on both compression and SSIM,
/// ordered by increasing compression. Of identical points the first is kept.
std::vector<std::size_t> pareto_frontier(std::span<const SweepPoint> points);

}  // namespace dlfr
