#pragma once

#include "dlfr/latent.hpp"
#include "dlfr/pipeline.hpp"
#include "dlfr/quality.hpp"
#include "dlfr/scheduler.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dlfr {

struct CodecOptions {
    DownMethod down = DownMethod::drop;
    UpMethod up = UpMethod::linear;
    /// Active slots; the pipeline's full placement when unset.
    std::optional<Placement> placement;
};

/// Everything the decoder needs beyond the per-segment latents. Carried as
/// the container's length-prefixed descriptor text:
///   pipeline=<descriptor>;placement=<e../d..>;frames=N;width=W;height=H;down=..;up=..
struct StreamDescriptor {
    std::string pipeline;
    Placement placement;
    std::size_t total_frames = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    DownMethod down = DownMethod::drop;
    UpMethod up = UpMethod::linear;

    std::string to_string() const;
    static StreamDescriptor parse(std::string_view text);
    friend bool operator==(const StreamDescriptor&, const StreamDescriptor&) = default;
};

struct ClassTableEntry {
    float eff_freq = 0.0f;
    std::uint32_t ratio = 1;
    friend bool operator==(const ClassTableEntry&, const ClassTableEntry&) = default;
};

/// Variable-rate latent representation of a clip.
struct LatentStream {
    float source_fps = 0.0f;
    std::uint32_t segment_len = 0;
    std::string descriptor;  // StreamDescriptor text
    std::vector<ClassTableEntry> classes;
    std::vector<LatentSegment> segments;

    friend bool operator==(const LatentStream&, const LatentStream&) = default;
};

/// Encodes each scheduled segment through the pipeline, downsampling at the
/// active slots until the segment's ratio is reached.
LatentStream encode(const Clip& clip, const RateSchedule& sched, const Pipeline& pipeline,
                    const CodecOptions& options = {});

/// Decodes with the pipeline recorded in the stream header.
Clip decode(const LatentStream& stream);

/// Decodes with a caller-supplied pipeline, which must match the header.
Clip decode(const LatentStream& stream, const Pipeline& pipeline);

/// encode + decode.
Clip roundtrip(const Clip& clip, const RateSchedule& sched, const Pipeline& pipeline,
               const CodecOptions& options = {});

/// Mean temporal compression of a stream: source frames / latent steps.
double stream_compression_ratio(const LatentStream& stream);

// --- placement search ------------------------------------------------------

struct PlacementScore {
    Placement placement;
    double mean_ssim = 0.0;
    double mean_psnr = 0.0;
};

struct PlacementSearch {
    std::size_t ratio = 1;
    std::vector<PlacementScore> table;  // enumeration order
    std::size_t best = 0;               // index into table

    const PlacementScore& best_score() const { return table.at(best); }
};

/// Number of encoder (and decoder) slots a ratio occupies: its prime factor
/// count, capped at the available slots.
std::size_t slots_needed(const Pipeline& pipeline, std::size_t ratio);

/// Every legal placement for `ratio`: all size-m subsets of encoder slots
/// times all size-m subsets of decoder slots, both lexicographic.
std::vector<Placement> enumerate_placements(const Pipeline& pipeline, std::size_t ratio);

/// Mean clip quality over `corpus` when every segment runs at `latent_rate`
/// with the given placement.
PlacementScore evaluate_placement(const Pipeline& pipeline, const Placement& placement,
                                  std::span<const Clip> corpus, double latent_rate,
                                  DownMethod down = DownMethod::drop,
                                  UpMethod up = UpMethod::linear);

/// Exhaustive search; the best entry has the highest mean SSIM, ties going
/// to the earliest placement in enumeration order. All corpus clips must
/// share one frame rate.
PlacementSearch search_placement(const Pipeline& pipeline, std::span<const Clip> corpus,
                                 double latent_rate, DownMethod down = DownMethod::drop,
                                 UpMethod up = UpMethod::linear);

}  // namespace dlfr
