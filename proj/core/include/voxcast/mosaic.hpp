#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "voxcast/quantizer.hpp"

namespace voxcast {

enum class Channel : std::uint8_t { kRed = 0, kGreen = 1, kBlue = 2 };

inline constexpr std::size_t kChannels = 3;

/// Placement of a 3D volume's z-slices as tiles in an RGB frame. The slices
/// are split into three consecutive runs, one per colour channel; within a
/// channel the tiles are laid out row by row on a near-square grid.
struct MosaicLayout {
  std::size_t z = 0;
  std::size_t y = 0;
  std::size_t x = 0;
  std::size_t channels = kChannels;
  std::size_t slicesPerChannel = 0;
  std::size_t gridCols = 0;
  std::size_t gridRows = 0;
  std::size_t frameWidth = 0;
  std::size_t frameHeight = 0;
  std::uint8_t fillCode = 0;

  std::size_t pixelCount() const noexcept { return frameWidth * frameHeight; }
  std::size_t frameBytes() const noexcept { return pixelCount() * kChannels; }

  friend bool operator==(const MosaicLayout&, const MosaicLayout&) = default;
};

struct PixelLocation {
  Channel channel = Channel::kRed;
  std::size_t px = 0;
  std::size_t py = 0;

  friend bool operator==(const PixelLocation&, const PixelLocation&) = default;
};

struct VoxelIndex {
  std::size_t z = 0;
  std::size_t y = 0;
  std::size_t x = 0;

  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
};

/// Largest frame edge accepted, in pixels. PNG caps dimensions at 2^31 - 1.
inline constexpr std::size_t kMaxFrameEdge = 0x7fffffff;

/// Throws kContractViolation for zero extents and kOversize when the frame
/// would not be addressable.
MosaicLayout computeLayout(std::size_t z, std::size_t y, std::size_t x,
                           std::uint8_t fillCode = 0);

PixelLocation voxelToPixel(const VoxelIndex& voxel, const MosaicLayout& layout);

/// Inverse of voxelToPixel. Padding and unused-tile pixels map to nullopt.
std::optional<VoxelIndex> pixelToVoxel(Channel channel, std::size_t px, std::size_t py,
                                       const MosaicLayout& layout);

/// Interleaved 8-bit RGB image, row-major without row padding. This is also
/// the rgb24 byte layout exchanged with external codecs.
struct RgbFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  RgbFrame() = default;
  RgbFrame(std::size_t w, std::size_t h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(w * h * kChannels, fill) {}

  std::size_t byteSize() const noexcept { return pixels.size(); }
  std::uint8_t& at(std::size_t px, std::size_t py, Channel c) {
    return pixels[(py * width + px) * kChannels + static_cast<std::size_t>(c)];
  }
  std::uint8_t at(std::size_t px, std::size_t py, Channel c) const {
    return pixels[(py * width + px) * kChannels + static_cast<std::size_t>(c)];
  }

  friend bool operator==(const RgbFrame&, const RgbFrame&) = default;
};

RgbFrame packFrame(const QuantizedFrame& codes, const MosaicLayout& layout);
QuantizedFrame unpackFrame(const RgbFrame& frame, const MosaicLayout& layout);

}  // namespace voxcast
