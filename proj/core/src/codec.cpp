#include "voxcast/codec.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "subprocess.hpp"
#include "voxcast/error.hpp"

namespace voxcast {
namespace fs = std::filesystem;

namespace {

std::size_t countOf(std::string_view text, std::string_view token) {
  std::size_t n = 0;
  for (auto pos = text.find(token); pos != std::string_view::npos;
       pos = text.find(token, pos + token.size())) {
    ++n;
  }
  return n;
}

void replaceOnce(std::string& text, std::string_view token, const std::string& value) {
  const auto pos = text.find(token);
  if (pos != std::string::npos) text.replace(pos, token.size(), value);
}

std::string firstWord(std::string_view command) {
  const auto begin = command.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = command.find_first_of(" \t", begin);
  return std::string(command.substr(begin, end - begin));
}

std::string tail(const std::string& text) {
  constexpr std::size_t kKeep = 2000;
  return text.size() <= kKeep ? text : "..." + text.substr(text.size() - kKeep);
}

std::string missingToolMessage(const std::string& label, std::string_view command) {
  return "codec tool '" + firstWord(command) + "' for preset '" + label +
         "' is not installed or not on PATH; install it or point --codec-config at a preset "
         "file whose commands exist on this machine";
}

}  // namespace

void validate(const EncoderSpec& spec) {
  if (spec.label.empty()) fail(ErrorCode::kSpecValidation, "encoder spec needs a label");
  for (std::string_view token : {"{width}", "{height}", "{fps}", "{output}"}) {
    const auto n = countOf(spec.commandTemplate, token);
    if (n != 1) {
      fail(ErrorCode::kSpecValidation, "encoder '" + spec.label + "' template must contain " +
                                           std::string(token) + " exactly once, found " +
                                           std::to_string(n));
    }
  }
}

void validate(const DecoderSpec& spec) {
  if (spec.label.empty()) fail(ErrorCode::kSpecValidation, "decoder spec needs a label");
  if (countOf(spec.commandTemplate, "{input}") != 1) {
    fail(ErrorCode::kSpecValidation,
         "decoder '" + spec.label + "' template must contain {input} exactly once");
  }
  for (std::string_view token : {"{width}", "{height}"}) {
    if (countOf(spec.commandTemplate, token) > 1) {
      fail(ErrorCode::kSpecValidation, "decoder '" + spec.label + "' template repeats " +
                                           std::string(token));
    }
  }
}

std::string shellQuote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

std::string formatFps(double fps) {
  std::ostringstream os;
  os.precision(10);
  os << fps;
  return os.str();
}

std::string renderEncoderCommand(const EncoderSpec& spec, std::size_t width, std::size_t height,
                                 double fps, const fs::path& output) {
  validate(spec);
  std::string cmd = spec.commandTemplate;
  replaceOnce(cmd, "{width}", std::to_string(width));
  replaceOnce(cmd, "{height}", std::to_string(height));
  replaceOnce(cmd, "{fps}", formatFps(fps));
  replaceOnce(cmd, "{output}", shellQuote(output.string()));
  return cmd;
}

std::string renderDecoderCommand(const DecoderSpec& spec, const fs::path& input, std::size_t width,
                                 std::size_t height) {
  validate(spec);
  std::string cmd = spec.commandTemplate;
  replaceOnce(cmd, "{input}", shellQuote(input.string()));
  replaceOnce(cmd, "{width}", std::to_string(width));
  replaceOnce(cmd, "{height}", std::to_string(height));
  return cmd;
}

bool toolAvailable(std::string_view commandTemplate) {
  const std::string tool = firstWord(commandTemplate);
  if (tool.empty()) return false;
  if (tool.find('/') != std::string::npos) return ::access(tool.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (path == nullptr) return false;
  std::string_view dirs(path);
  while (!dirs.empty()) {
    const auto sep = dirs.find(':');
    const std::string dir(dirs.substr(0, sep));
    const std::string candidate = (dir.empty() ? "." : dir) + "/" + tool;
    if (::access(candidate.c_str(), X_OK) == 0) return true;
    if (sep == std::string_view::npos) break;
    dirs.remove_prefix(sep + 1);
  }
  return false;
}

void CodecRegistry::add(CodecPreset preset) {
  validate(preset.encoder);
  validate(preset.decoder);
  const std::string label = preset.encoder.label;
  presets_.insert_or_assign(label, std::move(preset));
}

void CodecRegistry::loadJson(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::kIo, "cannot open codec config " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecValidation, "codec config " + file.string() + ": " + e.what());
  }
  if (!doc.contains("presets") || !doc["presets"].is_array()) {
    fail(ErrorCode::kSpecValidation, "codec config " + file.string() + " lacks a presets array");
  }
  for (const auto& entry : doc["presets"]) {
    try {
      const auto label = entry.at("label").get<std::string>();
      add(CodecPreset{
          EncoderSpec{label, entry.at("encode").get<std::string>(),
                      entry.value("extension", std::string("video"))},
          DecoderSpec{label, entry.at("decode").get<std::string>()},
      });
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kSpecValidation, "codec config " + file.string() + ": " + e.what());
    }
  }
}

const CodecPreset* CodecRegistry::find(std::string_view label) const {
  const auto it = presets_.find(label);
  return it == presets_.end() ? nullptr : &it->second;
}

std::vector<std::string> CodecRegistry::labels() const {
  std::vector<std::string> out;
  out.reserve(presets_.size());
  for (const auto& [label, preset] : presets_) out.push_back(label);
  return out;
}

class VideoEncoder::Impl {
 public:
  explicit Impl(const std::string& command)
      : child(command, detail::Subprocess::Options{.pipeStdin = true, .pipeStdout = false}) {}
  detail::Subprocess child;
};

VideoEncoder::VideoEncoder(const EncoderSpec& spec, std::size_t width, std::size_t height,
                           double fps, const fs::path& output)
    : spec_(spec), width_(width), height_(height), output_(output) {
  validate(spec_);
  if (width == 0 || height == 0 || width % 2 != 0 || height % 2 != 0) {
    fail(ErrorCode::kContractViolation, "video frames need non-zero even dimensions, got " +
                                            std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(fps > 0.0)) fail(ErrorCode::kContractViolation, "fps must be positive");
  if (!toolAvailable(spec_.commandTemplate)) {
    fail(ErrorCode::kToolUnavailable, missingToolMessage(spec_.label, spec_.commandTemplate));
  }
  impl_ = std::make_unique<Impl>(renderEncoderCommand(spec_, width, height, fps, output_));
}

VideoEncoder::~VideoEncoder() = default;

void VideoEncoder::raiseChildFailure(const char* during) {
  impl_->child.closeStdin();
  const int status = impl_->child.wait();
  const std::string diag = tail(impl_->child.diagnostics());
  if (detail::isShellMissingTool(status)) {
    fail(ErrorCode::kToolUnavailable,
         missingToolMessage(spec_.label, spec_.commandTemplate) + "\n" + diag);
  }
  if (status != 0) {
    fail(ErrorCode::kEncoderFailure, "encoder '" + spec_.label + "' exited with status " +
                                         std::to_string(status) + " " + during + ":\n" + diag);
  }
  fail(ErrorCode::kEncoderAborted, "encoder '" + spec_.label + "' closed its input after " +
                                       std::to_string(framesWritten_) + " frames\n" + diag);
}

void VideoEncoder::write(const RgbFrame& frame) {
  if (!impl_) fail(ErrorCode::kContractViolation, "encoder already finished");
  if (frame.width != width_ || frame.height != height_ ||
      frame.pixels.size() != width_ * height_ * kChannels) {
    fail(ErrorCode::kDimensionMismatch,
         "frame " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
             " does not match encoder stream " + std::to_string(width_) + "x" +
             std::to_string(height_));
  }
  if (!impl_->child.writeAll(frame.pixels.data(), frame.pixels.size())) {
    raiseChildFailure("while receiving frames");
  }
  bytesWritten_ += frame.pixels.size();
  ++framesWritten_;
}

std::uintmax_t VideoEncoder::finish() {
  if (!impl_) fail(ErrorCode::kContractViolation, "encoder already finished");
  impl_->child.closeStdin();
  const int status = impl_->child.wait();
  if (status != 0) raiseChildFailure("at end of stream");
  impl_.reset();
  std::error_code ec;
  const auto size = fs::file_size(output_, ec);
  if (ec) {
    fail(ErrorCode::kEncoderFailure,
         "encoder '" + spec_.label + "' produced no output at " + output_.string());
  }
  return size;
}

std::uintmax_t encodeVideo(std::span<const RgbFrame> frames, const EncoderSpec& spec, double fps,
                           const fs::path& output) {
  if (frames.empty()) fail(ErrorCode::kContractViolation, "cannot encode an empty frame sequence");
  VideoEncoder encoder(spec, frames.front().width, frames.front().height, fps, output);
  for (const auto& frame : frames) encoder.write(frame);
  return encoder.finish();
}

std::vector<RgbFrame> decodeVideo(const fs::path& input, const DecoderSpec& spec,
                                  std::size_t width, std::size_t height, std::size_t frameCount) {
  validate(spec);
  std::vector<RgbFrame> frames;
  if (frameCount == 0) return frames;
  if (width == 0 || height == 0) {
    fail(ErrorCode::kContractViolation, "decode needs non-zero frame dimensions");
  }
  if (!toolAvailable(spec.commandTemplate)) {
    fail(ErrorCode::kToolUnavailable, missingToolMessage(spec.label, spec.commandTemplate));
  }

  detail::Subprocess child(renderDecoderCommand(spec, input, width, height),
                           detail::Subprocess::Options{.pipeStdin = false, .pipeStdout = true});
  frames.reserve(frameCount);
  std::size_t partialBytes = 0;
  while (frames.size() < frameCount) {
    RgbFrame frame(width, height);
    partialBytes = child.readSome(frame.pixels.data(), frame.pixels.size());
    if (partialBytes != frame.pixels.size()) break;
    frames.push_back(std::move(frame));
    partialBytes = 0;
  }

  const bool complete = frames.size() == frameCount;
  char extra = 0;
  const bool overrun = complete && child.readSome(&extra, 1) == 1;
  child.closeStdout();
  const int status = child.wait();
  const std::string diag = tail(child.diagnostics());

  if (detail::isShellMissingTool(status)) {
    fail(ErrorCode::kToolUnavailable, missingToolMessage(spec.label, spec.commandTemplate) +
                                          "\n" + diag);
  }
  if (!complete) {
    std::string msg = "decoder '" + spec.label + "' stream ended after " +
                      std::to_string(frames.size()) + " of " + std::to_string(frameCount) +
                      " frames";
    if (partialBytes > 0) {
      msg += " plus " + std::to_string(partialBytes) + " bytes of a partial frame";
    }
    if (status != 0) msg += " (exit status " + std::to_string(status) + ")";
    fail(ErrorCode::kTruncatedStream, msg + "\n" + diag);
  }
  if (overrun) {
    fail(ErrorCode::kDimensionMismatch,
         "decoder '" + spec.label + "' produced more than " + std::to_string(frameCount) +
             " frames of " + std::to_string(width) + "x" + std::to_string(height) +
             "; stream dimensions or frame count disagree");
  }
  if (status != 0) {
    fail(ErrorCode::kEncoderFailure,
         "decoder '" + spec.label + "' exited with status " + std::to_string(status) + ":\n" + diag);
  }
  return frames;
}

}  // namespace voxcast
