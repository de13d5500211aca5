#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "voxcast/codec.hpp"
#include "voxcast/field.hpp"
#include "voxcast/mosaic.hpp"
#include "voxcast/quantizer.hpp"

namespace voxcast {

inline constexpr int kManifestVersion = 1;
inline constexpr double kDefaultFps = 10.0;
inline constexpr const char* kManifestFile = "manifest.json";

struct FramesMedia {
  std::vector<std::string> files;
  friend bool operator==(const FramesMedia&, const FramesMedia&) = default;
};

struct VideoMedia {
  std::string file;
  std::string codecLabel;
  friend bool operator==(const VideoMedia&, const VideoMedia&) = default;
};

/// Pixel carrying the frame index when a dataset is encoded with the debug
/// frame counter: R = i & 0xff, G = (i >> 8) & 0xff, B = (i >> 16) & 0xff.
struct FrameCounterPixel {
  std::size_t px = 0;
  std::size_t py = 0;
  friend bool operator==(const FrameCounterPixel&, const FrameCounterPixel&) = default;
};

/// Everything a remote client needs to invert the scaling and the tiling.
struct DatasetManifest {
  int version = kManifestVersion;
  std::string name;
  Dims4 dims;
  double vmin = 0.0;
  double vmax = 0.0;
  MosaicLayout layout;
  double fps = kDefaultFps;
  std::variant<FramesMedia, VideoMedia> media;
  std::size_t nanCount = 0;
  std::optional<FrameCounterPixel> debugFrameCounter;

  Quantizer quantizer() const noexcept { return Quantizer{vmin, vmax}; }
  /// Media files in the order a client would fetch them.
  std::vector<std::string> mediaFiles() const;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Throws kInvalidManifest when an invariant does not hold (frame list length,
/// layout recomputed from dims, vmin <= vmax, safe media file names).
void validateManifest(const DatasetManifest& manifest);

std::string manifestToJson(const DatasetManifest& manifest);
DatasetManifest manifestFromJson(std::string_view text);

DatasetManifest readManifest(const std::filesystem::path& file);
void writeManifest(const DatasetManifest& manifest, const std::filesystem::path& file);

/// frame_%06d.png
std::string frameFileName(std::size_t index);

/// True for plain file names that cannot escape a dataset directory.
bool isSafeFileName(std::string_view name);

struct EncodeOptions {
  double fps = kDefaultFps;
  std::size_t nanCount = 0;
  /// Stamp each frame's index into a padding pixel.
  bool debugFrameCounter = false;
  /// Encode through this external codec instead of writing PNG frames.
  const CodecPreset* video = nullptr;
};

/// Quantizes with one global scale, tiles every time step and writes the
/// media files followed by manifest.json into `outDir`.
DatasetManifest encodeDataset(const Field4D& field, const std::filesystem::path& outDir,
                              const EncodeOptions& options = {});

/// The 8-bit codes per time step as stored in the dataset's media.
std::vector<QuantizedFrame> decodeDatasetCodes(const std::filesystem::path& manifestPath,
                                               const CodecRegistry* codecs = nullptr);

/// Dequantized field reconstructed from the manifest and its media alone.
Field4D decodeDataset(const std::filesystem::path& manifestPath,
                      const CodecRegistry* codecs = nullptr);

/// Quantized frame `t` tiled into an RGB mosaic, with the debug counter when
/// `counter` is set.
RgbFrame renderFrame(const Field4D& field, std::size_t t, const Quantizer& q,
                     const MosaicLayout& layout,
                     const std::optional<FrameCounterPixel>& counter = std::nullopt);

/// Pixel used for the debug frame counter, or nullopt when the layout has no
/// padding pixel free in all three channels.
std::optional<FrameCounterPixel> frameCounterPixel(const MosaicLayout& layout);

}  // namespace voxcast
