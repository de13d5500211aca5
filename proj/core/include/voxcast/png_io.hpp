#pragma once

#include <filesystem>

#include "voxcast/mosaic.hpp"

namespace voxcast {

/// zlib level used for every frame PNG.
inline constexpr int kPngCompressionLevel = 6;

/// Writes an 8-bit RGB, non-interlaced PNG without alpha.
void writeFramePixels(const RgbFrame& frame, const std::filesystem::path& file);

/// Accepts only 8-bit RGB PNGs without alpha; anything else is
/// kUnsupportedFormat, undecodable data is kCorruptMedia.
RgbFrame readFramePixels(const std::filesystem::path& file);

}  // namespace voxcast
