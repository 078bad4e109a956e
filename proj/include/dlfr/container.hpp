#pragma once

// Binary latent container. Little-endian throughout:
//
//   "DLFR"  u16 version
//   f32 source_fps  u32 segment_len  u32 n_segments
//   u32 descriptor_len  descriptor bytes
//   u32 n_classes  n_classes x { f32 eff_freq, u32 ratio }
//   n_segments x {
//     u32 index  f32 latent_rate  u32 T'  u32 C  u32 h'  u32 w'
//     T'*C*h'*w' x f32 payload
//     u32 crc32(payload bytes)
//   }

#include "dlfr/codec.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dlfr {

inline constexpr char kContainerMagic[4] = {'D', 'L', 'F', 'R'};
inline constexpr std::uint16_t kContainerVersion = 1;

std::vector<std::uint8_t> serialize(const LatentStream& stream);

/// Throws ErrorKind::magic, version, truncated or checksum for the matching
/// defect, and ErrorKind::format for trailing bytes or inconsistent counts.
LatentStream deserialize(std::span<const std::uint8_t> bytes);

void write_stream(const std::filesystem::path& path, const LatentStream& stream);
LatentStream read_stream(const std::filesystem::path& path);

/// Byte offset and length of each segment's payload inside `bytes`.
struct PayloadSpan {
    std::size_t offset = 0;
    std::size_t length = 0;
};
std::vector<PayloadSpan> payload_spans(std::span<const std::uint8_t> bytes);

}  // namespace dlfr
