#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxcast/mosaic.hpp"

namespace voxcast {

/// Shell command that reads packed rgb24 frames on stdin and writes a video
/// file. The template must contain each of {width} {height} {fps} {output}
/// exactly once.
struct EncoderSpec {
  std::string label;
  std::string commandTemplate;
  std::string extension;  // container file extension, without the dot
};

/// Shell command that reads the video named by {input} and writes packed
/// rgb24 frames to stdout. {input} is required once; {width} and {height}
/// may appear at most once.
struct DecoderSpec {
  std::string label;
  std::string commandTemplate;
};

struct CodecPreset {
  EncoderSpec encoder;
  DecoderSpec decoder;
};

/// Throws kSpecValidation describing the first problem found.
void validate(const EncoderSpec& spec);
void validate(const DecoderSpec& spec);

/// Single-quotes `text` for /bin/sh.
std::string shellQuote(std::string_view text);

/// Shortest decimal form, e.g. 10 or 29.97.
std::string formatFps(double fps);

std::string renderEncoderCommand(const EncoderSpec& spec, std::size_t width, std::size_t height,
                                 double fps, const std::filesystem::path& output);
std::string renderDecoderCommand(const DecoderSpec& spec, const std::filesystem::path& input,
                                 std::size_t width, std::size_t height);

/// True when the first word of the command resolves to an executable,
/// either as a path or via $PATH.
bool toolAvailable(std::string_view commandTemplate);

/// Label-indexed codec presets. The preset definitions live in JSON files:
///
///   {"presets": [{"label": "theora-q2", "extension": "ogv",
///                 "encode": "ffmpeg ... {width}x{height} -r {fps} ... {output}",
///                 "decode": "ffmpeg -i {input} -f rawvideo -pix_fmt rgb24 -"}]}
class CodecRegistry {
 public:
  /// Adds or replaces a preset after validating both templates.
  void add(CodecPreset preset);
  void loadJson(const std::filesystem::path& file);

  const CodecPreset* find(std::string_view label) const;
  std::vector<std::string> labels() const;
  bool empty() const noexcept { return presets_.empty(); }

 private:
  std::map<std::string, CodecPreset, std::less<>> presets_;
};

/// Streams frames into an external encoder. Writes block while the child
/// applies back-pressure, so producer and encoder form a bounded pipeline.
class VideoEncoder {
 public:
  VideoEncoder(const EncoderSpec& spec, std::size_t width, std::size_t height, double fps,
               const std::filesystem::path& output);
  ~VideoEncoder();

  VideoEncoder(const VideoEncoder&) = delete;
  VideoEncoder& operator=(const VideoEncoder&) = delete;

  void write(const RgbFrame& frame);

  /// Closes the stream, waits for the encoder and returns the output size.
  std::uintmax_t finish();

  std::uint64_t bytesWritten() const noexcept { return bytesWritten_; }
  std::size_t framesWritten() const noexcept { return framesWritten_; }

 private:
  [[noreturn]] void raiseChildFailure(const char* during);

  class Impl;
  std::unique_ptr<Impl> impl_;
  EncoderSpec spec_;
  std::size_t width_;
  std::size_t height_;
  std::filesystem::path output_;
  std::uint64_t bytesWritten_ = 0;
  std::size_t framesWritten_ = 0;
};

std::uintmax_t encodeVideo(std::span<const RgbFrame> frames, const EncoderSpec& spec, double fps,
                           const std::filesystem::path& output);

/// Runs the decoder and slices its stdout into exactly `frameCount` frames.
std::vector<RgbFrame> decodeVideo(const std::filesystem::path& input, const DecoderSpec& spec,
                                  std::size_t width, std::size_t height, std::size_t frameCount);

}  // namespace voxcast
