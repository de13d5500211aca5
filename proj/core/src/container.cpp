#include "voxcast/container.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "parallel.hpp"
#include "voxcast/error.hpp"
#include "voxcast/png_io.hpp"

namespace voxcast {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  fail(ErrorCode::kInvalidManifest, "manifest: " + what);
}

void ensureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::size_t sizeField(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_unsigned()) {
    invalid(std::string("'") + key + "' must be a non-negative integer");
  }
  return obj[key].get<std::size_t>();
}

double realField(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) invalid(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

const json& objectField(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_object()) invalid(std::string("'") + key + "' must be an object");
  return obj[key];
}

}  // namespace

std::string frameFileName(std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06zu.png", index);
  return name;
}

bool isSafeFileName(std::string_view name) {
  if (name.empty() || name == "." || name == "..") return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::vector<std::string> DatasetManifest::mediaFiles() const {
  if (const auto* frames = std::get_if<FramesMedia>(&media)) return frames->files;
  return {std::get<VideoMedia>(media).file};
}

void validateManifest(const DatasetManifest& m) {
  if (m.version != kManifestVersion) invalid("unsupported version " + std::to_string(m.version));
  if (m.dims.t == 0 || m.dims.z == 0 || m.dims.y == 0 || m.dims.x == 0) {
    invalid("dims must all be >= 1");
  }
  if (!(m.vmin <= m.vmax)) invalid("vmin must not exceed vmax");
  if (!(m.fps > 0.0)) invalid("fps must be positive");
  MosaicLayout expected;
  try {
    expected = computeLayout(m.dims.z, m.dims.y, m.dims.x, m.layout.fillCode);
  } catch (const Error& e) {
    invalid(std::string("layout cannot be derived from dims: ") + e.what());
  }
  if (!(expected == m.layout)) invalid("layout does not match the one derived from dims");
  if (const auto* frames = std::get_if<FramesMedia>(&m.media)) {
    if (frames->files.size() != m.dims.t) {
      invalid("lists " + std::to_string(frames->files.size()) + " frame files for " +
              std::to_string(m.dims.t) + " time steps");
    }
  } else if (std::get<VideoMedia>(m.media).codecLabel.empty()) {
    invalid("video media needs a codecLabel");
  }
  for (const auto& file : m.mediaFiles()) {
    if (!isSafeFileName(file)) invalid("media file name '" + file + "' is not a plain file name");
  }
  if (m.debugFrameCounter) {
    const auto& c = *m.debugFrameCounter;
    if (c.px >= m.layout.frameWidth || c.py >= m.layout.frameHeight) {
      invalid("debugFrameCounter pixel lies outside the frame");
    }
  }
}

std::string manifestToJson(const DatasetManifest& m) {
  const auto& L = m.layout;
  json doc = {
      {"version", m.version},
      {"name", m.name},
      {"dims", {{"t", m.dims.t}, {"z", m.dims.z}, {"y", m.dims.y}, {"x", m.dims.x}}},
      {"vmin", m.vmin},
      {"vmax", m.vmax},
      {"layout",
       {{"channels", L.channels},
        {"slicesPerChannel", L.slicesPerChannel},
        {"gridCols", L.gridCols},
        {"gridRows", L.gridRows},
        {"frameWidth", L.frameWidth},
        {"frameHeight", L.frameHeight},
        {"fillCode", L.fillCode}}},
      {"fps", m.fps},
      {"nanCount", m.nanCount},
  };
  if (const auto* frames = std::get_if<FramesMedia>(&m.media)) {
    doc["media"] = {{"kind", "frames"}, {"files", frames->files}};
  } else {
    const auto& video = std::get<VideoMedia>(m.media);
    doc["media"] = {{"kind", "video"}, {"file", video.file}, {"codecLabel", video.codecLabel}};
  }
  if (m.debugFrameCounter) {
    doc["debugFrameCounter"] = {{"px", m.debugFrameCounter->px}, {"py", m.debugFrameCounter->py}};
  }
  return doc.dump(2) + "\n";
}

DatasetManifest manifestFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) invalid("top level must be an object");

  DatasetManifest m;
  if (!doc.contains("version") || !doc["version"].is_number_integer()) invalid("'version' missing");
  m.version = doc["version"].get<int>();
  if (doc.contains("name") && doc["name"].is_string()) m.name = doc["name"].get<std::string>();

  const auto& dims = objectField(doc, "dims");
  m.dims = {sizeField(dims, "t"), sizeField(dims, "z"), sizeField(dims, "y"), sizeField(dims, "x")};
  m.vmin = realField(doc, "vmin");
  m.vmax = realField(doc, "vmax");

  const auto& layout = objectField(doc, "layout");
  m.layout.z = m.dims.z;
  m.layout.y = m.dims.y;
  m.layout.x = m.dims.x;
  m.layout.channels = layout.contains("channels") ? sizeField(layout, "channels") : kChannels;
  m.layout.slicesPerChannel = sizeField(layout, "slicesPerChannel");
  m.layout.gridCols = sizeField(layout, "gridCols");
  m.layout.gridRows = sizeField(layout, "gridRows");
  m.layout.frameWidth = sizeField(layout, "frameWidth");
  m.layout.frameHeight = sizeField(layout, "frameHeight");
  const std::size_t fill = sizeField(layout, "fillCode");
  if (fill > 255) invalid("'fillCode' must fit in 8 bits");
  m.layout.fillCode = static_cast<std::uint8_t>(fill);

  m.fps = realField(doc, "fps");
  m.nanCount = doc.contains("nanCount") ? sizeField(doc, "nanCount") : 0;

  const auto& media = objectField(doc, "media");
  const std::string kind = media.value("kind", "");
  try {
    if (kind == "frames") {
      m.media = FramesMedia{media.at("files").get<std::vector<std::string>>()};
    } else if (kind == "video") {
      m.media = VideoMedia{media.at("file").get<std::string>(),
                           media.at("codecLabel").get<std::string>()};
    } else {
      invalid("unknown media kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    invalid(std::string("malformed media: ") + e.what());
  }

  if (doc.contains("debugFrameCounter")) {
    const auto& c = objectField(doc, "debugFrameCounter");
    m.debugFrameCounter = FrameCounterPixel{sizeField(c, "px"), sizeField(c, "py")};
  }
  validateManifest(m);
  return m;
}

DatasetManifest readManifest(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open manifest " + file.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return manifestFromJson(text);
  } catch (const Error& e) {
    fail(e.code(), file.string() + ": " + e.what());
  }
}

void writeManifest(const DatasetManifest& manifest, const fs::path& file) {
  validateManifest(manifest);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot create manifest " + file.string());
  out << manifestToJson(manifest);
  if (!out) fail(ErrorCode::kIo, "failed writing manifest " + file.string());
}

std::optional<FrameCounterPixel> frameCounterPixel(const MosaicLayout& layout) {
  const std::size_t px = layout.frameWidth - 1;
  const std::size_t py = layout.frameHeight - 1;
  for (Channel c : {Channel::kRed, Channel::kGreen, Channel::kBlue}) {
    if (pixelToVoxel(c, px, py, layout)) return std::nullopt;
  }
  return FrameCounterPixel{px, py};
}

RgbFrame renderFrame(const Field4D& field, std::size_t t, const Quantizer& q,
                     const MosaicLayout& layout, const std::optional<FrameCounterPixel>& counter) {
  RgbFrame frame = packFrame(quantizeStep(field, t, q), layout);
  if (counter) {
    frame.at(counter->px, counter->py, Channel::kRed) = static_cast<std::uint8_t>(t & 0xffu);
    frame.at(counter->px, counter->py, Channel::kGreen) = static_cast<std::uint8_t>((t >> 8) & 0xffu);
    frame.at(counter->px, counter->py, Channel::kBlue) = static_cast<std::uint8_t>((t >> 16) & 0xffu);
  }
  return frame;
}

DatasetManifest encodeDataset(const Field4D& field, const fs::path& outDir,
                              const EncodeOptions& options) {
  const auto& d = field.dims();
  requireValidDims(d);
  if (!(options.fps > 0.0)) fail(ErrorCode::kContractViolation, "fps must be positive");

  DatasetManifest m;
  m.name = field.name();
  m.dims = d;
  const Quantizer q = makeQuantizer(field);
  m.vmin = q.vmin;
  m.vmax = q.vmax;
  m.layout = computeLayout(d.z, d.y, d.x);
  m.fps = options.fps;
  m.nanCount = options.nanCount;
  if (options.debugFrameCounter) {
    m.debugFrameCounter = frameCounterPixel(m.layout);
    if (!m.debugFrameCounter) {
      fail(ErrorCode::kContractViolation,
           "layout has no padding pixel free for the debug frame counter");
    }
  }
  ensureDirectory(outDir);

  if (options.video != nullptr) {
    const auto& enc = options.video->encoder;
    const std::string file = "video." + enc.extension;
    VideoEncoder encoder(enc, m.layout.frameWidth, m.layout.frameHeight, m.fps, outDir / file);
    for (std::size_t t = 0; t < d.t; ++t) {
      encoder.write(renderFrame(field, t, q, m.layout, m.debugFrameCounter));
    }
    encoder.finish();
    m.media = VideoMedia{file, enc.label};
  } else {
    FramesMedia frames;
    frames.files.reserve(d.t);
    for (std::size_t t = 0; t < d.t; ++t) frames.files.push_back(frameFileName(t));
    detail::parallelFor(d.t, [&](std::size_t t) {
      writeFramePixels(renderFrame(field, t, q, m.layout, m.debugFrameCounter),
                       outDir / frames.files[t]);
    });
    m.media = std::move(frames);
  }

  writeManifest(m, outDir / kManifestFile);
  return m;
}

std::vector<QuantizedFrame> decodeDatasetCodes(const fs::path& manifestPath,
                                               const CodecRegistry* codecs) {
  const DatasetManifest m = readManifest(manifestPath);
  const fs::path dir = manifestPath.parent_path();
  const auto& L = m.layout;
  std::vector<QuantizedFrame> codes(m.dims.t);

  if (const auto* frames = std::get_if<FramesMedia>(&m.media)) {
    for (const auto& file : frames->files) {
      if (!fs::is_regular_file(dir / file)) {
        fail(ErrorCode::kMissingMedia, "frame file " + (dir / file).string() +
                                           " listed in the manifest is missing");
      }
    }
    detail::parallelFor(m.dims.t, [&](std::size_t t) {
      const fs::path path = dir / frames->files[t];
      const RgbFrame frame = readFramePixels(path);
      if (frame.width != L.frameWidth || frame.height != L.frameHeight) {
        fail(ErrorCode::kDimensionMismatch,
             path.string() + " is " + std::to_string(frame.width) + "x" +
                 std::to_string(frame.height) + ", manifest expects " +
                 std::to_string(L.frameWidth) + "x" + std::to_string(L.frameHeight));
      }
      codes[t] = unpackFrame(frame, L);
    });
    return codes;
  }

  const auto& video = std::get<VideoMedia>(m.media);
  const fs::path path = dir / video.file;
  if (!fs::is_regular_file(path)) {
    fail(ErrorCode::kMissingMedia, "video file " + path.string() + " listed in the manifest is missing");
  }
  const CodecPreset* preset = codecs ? codecs->find(video.codecLabel) : nullptr;
  if (preset == nullptr) {
    fail(ErrorCode::kToolUnavailable,
         "no decoder configured for codec '" + video.codecLabel + "'; pass a codec config");
  }
  const auto frames = decodeVideo(path, preset->decoder, L.frameWidth, L.frameHeight, m.dims.t);
  for (std::size_t t = 0; t < frames.size(); ++t) codes[t] = unpackFrame(frames[t], L);
  return codes;
}

Field4D decodeDataset(const fs::path& manifestPath, const CodecRegistry* codecs) {
  const DatasetManifest m = readManifest(manifestPath);
  const auto codes = decodeDatasetCodes(manifestPath, codecs);
  Field4D field = Field4D::zeros(m.dims, m.name);
  const Quantizer q = m.quantizer();
  for (std::size_t t = 0; t < codes.size(); ++t) dequantizeInto(codes[t], q, field, t);
  return field;
}

}  // namespace voxcast
