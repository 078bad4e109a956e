#pragma once

#include "dlfr/video.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace dlfr {

// Raw clip file:
//   "DLFRRAW <width> <height> <n_frames> <fps>\n"
//   followed by n_frames planes of width*height bytes (8-bit luma, row-major).
//
// Image directory: lexicographically ordered grayscale or color PNG/PGM/PPM
// files plus a one-line sidecar "fps.txt" holding the frame rate. Color
// images are reduced to BT.601 luma.
enum class ClipFormat { raw, image_dir };

inline constexpr std::string_view kRawMagic = "DLFRRAW";
inline constexpr std::string_view kFpsSidecar = "fps.txt";

ClipFormat parse_clip_format(std::string_view name);

/// Picks image_dir for directories, raw otherwise.
ClipFormat guess_clip_format(const std::filesystem::path& path);

Clip load_clip(const std::filesystem::path& path, ClipFormat format);
Clip load_clip(const std::filesystem::path& path);

Clip read_raw_clip(std::istream& in);
void write_raw_clip(std::ostream& out, const Clip& clip);

/// Samples are rounded and clamped to 8 bits on output.
void save_clip(const std::filesystem::path& path, const Clip& clip,
               ClipFormat format = ClipFormat::raw);

}  // namespace dlfr
