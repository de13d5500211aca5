#include "voxcast/mosaic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "voxcast/error.hpp"

namespace voxcast {
namespace {

std::size_t ceilDiv(std::size_t a, std::size_t b) { return a / b + (a % b != 0); }

std::size_t ceilSqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 1 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

std::size_t roundUpEven(std::size_t n) { return n + (n & 1u); }

bool mulOverflows(std::size_t a, std::size_t b) {
  return a != 0 && b > std::numeric_limits<std::size_t>::max() / a;
}

std::string dimsText(std::size_t z, std::size_t y, std::size_t x) {
  return std::to_string(z) + "x" + std::to_string(y) + "x" + std::to_string(x);
}

}  // namespace

MosaicLayout computeLayout(std::size_t z, std::size_t y, std::size_t x,
                           std::uint8_t fillCode) {
  if (z == 0 || y == 0 || x == 0) {
    fail(ErrorCode::kContractViolation, "layout dims must be >= 1, got " + dimsText(z, y, x));
  }
  MosaicLayout layout;
  layout.z = z;
  layout.y = y;
  layout.x = x;
  layout.fillCode = fillCode;
  layout.slicesPerChannel = ceilDiv(z, kChannels);
  layout.gridCols = ceilSqrt(layout.slicesPerChannel);
  layout.gridRows = ceilDiv(layout.slicesPerChannel, layout.gridCols);

  if (mulOverflows(layout.gridCols, x) || mulOverflows(layout.gridRows, y)) {
    fail(ErrorCode::kOversize, "mosaic for " + dimsText(z, y, x) + " overflows frame size");
  }
  const std::size_t w = layout.gridCols * x;
  const std::size_t h = layout.gridRows * y;
  if (w >= kMaxFrameEdge || h >= kMaxFrameEdge) {
    fail(ErrorCode::kOversize, "mosaic for " + dimsText(z, y, x) + " exceeds the " +
                                   std::to_string(kMaxFrameEdge) + " pixel edge limit");
  }
  layout.frameWidth = roundUpEven(w);
  layout.frameHeight = roundUpEven(h);
  if (mulOverflows(layout.frameWidth, layout.frameHeight) ||
      mulOverflows(layout.frameWidth * layout.frameHeight, kChannels)) {
    fail(ErrorCode::kOversize, "mosaic for " + dimsText(z, y, x) + " overflows frame size");
  }
  return layout;
}

PixelLocation voxelToPixel(const VoxelIndex& v, const MosaicLayout& L) {
  if (v.z >= L.z || v.y >= L.y || v.x >= L.x) {
    fail(ErrorCode::kOutOfBounds, "voxel (" + dimsText(v.z, v.y, v.x) +
                                      ") outside volume " + dimsText(L.z, L.y, L.x));
  }
  const std::size_t s = v.z % L.slicesPerChannel;
  const std::size_t tileCol = s % L.gridCols;
  const std::size_t tileRow = s / L.gridCols;
  return PixelLocation{static_cast<Channel>(v.z / L.slicesPerChannel),
                       tileCol * L.x + v.x, tileRow * L.y + v.y};
}

std::optional<VoxelIndex> pixelToVoxel(Channel channel, std::size_t px, std::size_t py,
                                       const MosaicLayout& L) {
  const auto c = static_cast<std::size_t>(channel);
  if (px >= L.frameWidth || py >= L.frameHeight || c >= kChannels) {
    fail(ErrorCode::kOutOfBounds, "pixel (" + std::to_string(px) + "," +
                                      std::to_string(py) + ") outside " +
                                      std::to_string(L.frameWidth) + "x" +
                                      std::to_string(L.frameHeight) + " frame");
  }
  const std::size_t tileCol = px / L.x;
  const std::size_t tileRow = py / L.y;
  if (tileCol >= L.gridCols || tileRow >= L.gridRows) return std::nullopt;
  const std::size_t s = tileRow * L.gridCols + tileCol;
  if (s >= L.slicesPerChannel) return std::nullopt;
  const std::size_t zi = c * L.slicesPerChannel + s;
  if (zi >= L.z) return std::nullopt;
  return VoxelIndex{zi, py % L.y, px % L.x};
}

RgbFrame packFrame(const QuantizedFrame& codes, const MosaicLayout& L) {
  if (codes.z != L.z || codes.y != L.y || codes.x != L.x ||
      codes.codes.size() != L.z * L.y * L.x) {
    fail(ErrorCode::kDimensionMismatch,
         "codes " + dimsText(codes.z, codes.y, codes.x) + " do not match layout " +
             dimsText(L.z, L.y, L.x));
  }
  RgbFrame frame(L.frameWidth, L.frameHeight, L.fillCode);
  for (std::size_t zi = 0; zi < L.z; ++zi) {
    const auto origin = voxelToPixel({zi, 0, 0}, L);
    const auto c = static_cast<std::size_t>(origin.channel);
    for (std::size_t yi = 0; yi < L.y; ++yi) {
      const std::uint8_t* src = &codes.codes[codes.index(zi, yi, 0)];
      std::uint8_t* dst =
          &frame.pixels[((origin.py + yi) * L.frameWidth + origin.px) * kChannels + c];
      for (std::size_t xi = 0; xi < L.x; ++xi) dst[xi * kChannels] = src[xi];
    }
  }
  return frame;
}

QuantizedFrame unpackFrame(const RgbFrame& frame, const MosaicLayout& L) {
  if (frame.width != L.frameWidth || frame.height != L.frameHeight ||
      frame.pixels.size() != L.frameBytes()) {
    fail(ErrorCode::kDimensionMismatch,
         "frame " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
             " does not match layout frame " + std::to_string(L.frameWidth) + "x" +
             std::to_string(L.frameHeight));
  }
  QuantizedFrame codes{L.z, L.y, L.x, std::vector<std::uint8_t>(L.z * L.y * L.x)};
  for (std::size_t zi = 0; zi < L.z; ++zi) {
    const auto origin = voxelToPixel({zi, 0, 0}, L);
    const auto c = static_cast<std::size_t>(origin.channel);
    for (std::size_t yi = 0; yi < L.y; ++yi) {
      const std::uint8_t* src =
          &frame.pixels[((origin.py + yi) * L.frameWidth + origin.px) * kChannels + c];
      std::uint8_t* dst = &codes.codes[codes.index(zi, yi, 0)];
      for (std::size_t xi = 0; xi < L.x; ++xi) dst[xi] = src[xi * kChannels];
    }
  }
  return codes;
}

}  // namespace voxcast
