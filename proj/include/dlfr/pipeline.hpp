#pragma once

// Toy staged encoder/decoder with pluggable temporal resampling slots.
//
// Descriptor grammar (comma-separated stage tokens):
//
//   slot                        temporal resampling slot
//   id                          identity
//   pool:F                      F x F spatial mean pool (decoder: nearest unpool)
//   linear:C:SEED[:tanh]        seeded per-pixel channel projection to C
//                               channels, optionally squashed with tanh
//                               (decoder: atanh, then least-squares inverse)
//
// "<encoder tokens> => <decoder tokens>" gives the decoder explicitly; its
// non-slot tokens must name the encoder stages in reverse order. Without
// "=>" the decoder is the mirror image of the encoder, slots included.
//
// A `linear` token without a seed takes `default_seed + stage index`.

#include "dlfr/resample.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dlfr {

enum class StageKind {
    identity,
    spatial_mean_pool,
    fixed_linear,
    temporal_downsample_slot,
    temporal_upsample_slot,
};

struct PipelineStage {
    StageKind kind = StageKind::identity;
    std::size_t factor = 1;        // spatial_mean_pool
    std::size_t out_channels = 0;  // fixed_linear
    std::uint64_t seed = 0;        // fixed_linear
    bool saturate = false;         // fixed_linear: apply tanh

    bool is_slot() const noexcept {
        return kind == StageKind::temporal_downsample_slot ||
               kind == StageKind::temporal_upsample_slot;
    }
    friend bool operator==(const PipelineStage&, const PipelineStage&) = default;
};

struct Shape {
    std::size_t channels = 1;
    std::size_t height = 0;
    std::size_t width = 0;
    friend bool operator==(const Shape&, const Shape&) = default;
};

/// Which encoder and decoder slots carry temporal resampling, as indices
/// into the respective slot lists (ascending).
struct Placement {
    std::vector<std::size_t> encoder;
    std::vector<std::size_t> decoder;

    std::string to_string() const;  // "e0,2/d1"
    static Placement parse(std::string_view text);
    friend bool operator==(const Placement&, const Placement&) = default;
    friend auto operator<=>(const Placement&, const Placement&) = default;
};

class Pipeline {
public:
    static Pipeline parse(std::string_view descriptor, std::uint64_t default_seed = 0);
    static Pipeline identity();  // "slot"

    /// Canonical descriptor; parse(p.descriptor()) == p.
    std::string descriptor() const;

    const std::vector<PipelineStage>& encoder() const noexcept { return encoder_; }
    const std::vector<PipelineStage>& decoder() const noexcept { return decoder_; }
    std::size_t encoder_slots() const noexcept;
    std::size_t decoder_slots() const noexcept;

    /// Every slot active.
    Placement full_placement() const;

    /// Throws unless indices are ascending, distinct, in range and the two
    /// lists have equal length.
    void validate(const Placement& placement) const;

    /// Shape at the input of each encoder stage, plus the final latent shape
    /// as the last element. Throws ErrorKind::dimension when a pool factor
    /// does not divide the current size.
    std::vector<Shape> encoder_shapes(Shape input) const;
    Shape latent_shape(Shape input) const { return encoder_shapes(input).back(); }

    /// Runs the encoder; `factors[i]` is the temporal stride at the i-th slot.
    FeatureVolume run_encoder(FeatureVolume vol, const std::vector<std::size_t>& factors,
                              DownMethod method) const;
    /// Runs the decoder back to `output` shape; `factors[i]` is the
    /// upsampling factor at the i-th decoder slot.
    FeatureVolume run_decoder(FeatureVolume vol, Shape output,
                              const std::vector<std::size_t>& factors, UpMethod method) const;

    friend bool operator==(const Pipeline&, const Pipeline&) = default;

private:
    std::vector<PipelineStage> encoder_;
    std::vector<PipelineStage> decoder_;
};

/// Prime factors of `ratio` dealt round-robin over `slots` slots, front to
/// back, largest primes first. Throws when ratio > 1 and slots == 0.
std::vector<std::size_t> distribute_ratio(std::size_t ratio, std::size_t slots);

/// Per-slot strides for `placement` at total temporal ratio `ratio`.
/// Encoder slots fill from the input end; decoder slots from the output end,
/// so the k-th active encoder slot pairs with the k-th active decoder slot
/// counted backwards.
std::vector<std::size_t> encoder_factors(const Pipeline& p, const Placement& placement,
                                         std::size_t ratio);
std::vector<std::size_t> decoder_factors(const Pipeline& p, const Placement& placement,
                                         std::size_t ratio);

/// Seeded projection matrix (rows x cols, row-major), entries in [-1, 1).
std::vector<double> projection_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols);

}  // namespace dlfr
