#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "voxcast/codec.hpp"
#include "voxcast/container.hpp"
#include "voxcast/error.hpp"
#include "voxcast/metrics.hpp"
#include "voxcast/quantizer.hpp"
#include "voxcast/raw_volume.hpp"
#include "voxcast/server.hpp"
#include "voxcast/synth.hpp"

namespace voxcast::cli {
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::size_t> parseExtents(const std::string& text, std::size_t count,
                                      const char* pattern) {
  std::string re = "\\d+";
  for (std::size_t i = 1; i < count; ++i) re += "x\\d+";
  if (!std::regex_match(text, std::regex(re))) {
    throw UsageError("malformed dims '" + text + "': expected " + pattern);
  }
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('x', pos);
    const auto value = std::stoull(text.substr(pos, next - pos));
    if (value == 0) throw UsageError("dims must all be >= 1 in '" + text + "'");
    out.push_back(static_cast<std::size_t>(value));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

Dims4 parseDims4(const std::string& text) {
  const auto v = parseExtents(text, 4, "TxZxYxX (e.g. 4x6x16x16)");
  return Dims4{v[0], v[1], v[2], v[3]};
}

/// Codec presets: --codec-config, else $VOXCAST_CODECS, else the bundled cookbook.
CodecRegistry loadCodecs(const std::string& configPath) {
  CodecRegistry registry;
  if (!configPath.empty()) {
    registry.loadJson(configPath);
    return registry;
  }
  if (const char* env = std::getenv("VOXCAST_CODECS"); env != nullptr && *env != '\0') {
    registry.loadJson(env);
    return registry;
  }
#ifdef VOXCAST_DEFAULT_CODECS
  for (const char* candidate : {VOXCAST_DEFAULT_CODECS, VOXCAST_INSTALLED_CODECS}) {
    if (fs::is_regular_file(candidate)) {
      registry.loadJson(candidate);
      break;
    }
  }
#endif
  return registry;
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out.empty() ? "(none configured)" : out;
}

std::pair<std::string, int> parseListen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw UsageError("--listen expects HOST:PORT, got '" + listen + "'");
  const std::string port = listen.substr(colon + 1);
  if (!std::regex_match(port, std::regex("\\d{1,5}")) || std::stoi(port) > 65535) {
    throw UsageError("invalid port in --listen '" + listen + "'");
  }
  return {listen.substr(0, colon), std::stoi(port)};
}

std::string mappingFixture(const MosaicLayout& L, std::size_t count, std::uint64_t seed) {
  nlohmann::json mappings = nlohmann::json::array();
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const VoxelIndex v{rng.next() % L.z, rng.next() % L.y, rng.next() % L.x};
    const auto p = voxelToPixel(v, L);
    mappings.push_back({{"voxel", {v.z, v.y, v.x}},
                        {"channel", static_cast<int>(p.channel)},
                        {"px", p.px},
                        {"py", p.py}});
  }
  const nlohmann::json doc = {
      {"layout",
       {{"z", L.z}, {"y", L.y}, {"x", L.x}, {"channels", L.channels},
        {"slicesPerChannel", L.slicesPerChannel}, {"gridCols", L.gridCols},
        {"gridRows", L.gridRows}, {"frameWidth", L.frameWidth},
        {"frameHeight", L.frameHeight}, {"fillCode", L.fillCode}}},
      {"seed", seed},
      {"mappings", mappings},
  };
  return doc.dump(1) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"voxcast: time-dependent 3D fields as tiled RGB video", "voxcast"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic raw volume");
  std::uint64_t seed = 1;
  std::string dimsText;
  std::size_t blobs = kDefaultBlobs;
  std::string synthOut;
  synth->add_option("--seed", seed, "PRNG seed")->default_val(1);
  synth->add_option("--dims", dimsText, "Extent as TxZxYxX")->required();
  synth->add_option("--blobs", blobs, "Number of Gaussian blobs")->default_val(kDefaultBlobs)
      ->check(CLI::PositiveNumber);
  synth->add_option("--out", synthOut, "Output directory")->required();

  // encode
  auto* encode = app.add_subcommand("encode", "Quantize, tile and encode a raw volume");
  std::string encodeIn, encodeOut, videoLabel, codecConfig;
  double fps = kDefaultFps;
  bool debugCounter = false;
  encode->add_option("--in", encodeIn, "Raw volume directory (header.json + data.f32)")->required();
  encode->add_option("--out", encodeOut, "Dataset output directory")->required();
  encode->add_option("--fps", fps, "Playback rate recorded in the manifest")
      ->default_val(kDefaultFps)->check(CLI::PositiveNumber);
  encode->add_option("--video", videoLabel, "Encode through this codec preset instead of PNG frames");
  encode->add_option("--codec-config", codecConfig, "JSON file of codec presets");
  encode->add_flag("--debug-frame-counter", debugCounter,
                   "Stamp the frame index into a padding pixel of every frame");

  // decode
  auto* decode = app.add_subcommand("decode", "Reconstruct a raw volume from a dataset");
  std::string manifestPath, decodeOut;
  decode->add_option("--manifest", manifestPath, "Dataset manifest.json")->required();
  decode->add_option("--out", decodeOut, "Raw volume output directory")->required();
  decode->add_option("--codec-config", codecConfig, "JSON file of codec presets");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Compare data volume and error across encodings");
  std::string metricsIn, variantsText, csvPath, workDir;
  metrics->add_option("--in", metricsIn, "Raw volume directory")->required();
  metrics->add_option("--variants", variantsText,
                      "Comma-separated: raw-f32,quantized-8bit,png-frames,video:<label>")
      ->default_val("raw-f32,quantized-8bit,png-frames");
  metrics->add_option("--csv", csvPath, "Write the report as CSV to this file");
  metrics->add_option("--work", workDir, "Scratch directory for encoded variants");
  metrics->add_option("--codec-config", codecConfig, "JSON file of codec presets");
  metrics->add_option("--fps", fps, "Frame rate for video variants")->default_val(kDefaultFps);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve datasets over HTTP");
  std::string root, listen;
  serve->add_option("--root", root, "Dataset root directory")->envname("VOXCAST_ROOT")->required();
  serve->add_option("--listen", listen, "HOST:PORT")
      ->envname("VOXCAST_LISTEN")->default_val("127.0.0.1:8080");

  // mapping-fixture
  auto* fixture = app.add_subcommand("mapping-fixture",
                                     "Export sample voxel-to-pixel mappings as JSON");
  std::string volumeDims, fixtureOut;
  std::size_t fixtureCount = 1000;
  std::uint64_t fixtureSeed = 7;
  fixture->add_option("--dims", volumeDims, "Volume extent as ZxYxX")->required();
  fixture->add_option("--count", fixtureCount, "Number of mappings")->default_val(1000);
  fixture->add_option("--seed", fixtureSeed, "Sampling seed")->default_val(7);
  fixture->add_option("--out", fixtureOut, "Output JSON file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*synth) {
      const Dims4 dims = parseDims4(dimsText);
      const Field4D field = synthesizeField(seed, dims, blobs);
      writeRawVolumeDir(field, synthOut);
      const Quantizer range = makeQuantizer(field);
      out << "dims " << dims.t << "x" << dims.z << "x" << dims.y << "x" << dims.x
          << " range [" << range.vmin << ", " << range.vmax << "] -> " << synthOut << "\n";
    } else if (*encode) {
      CodecRegistry codecs = loadCodecs(codecConfig);
      const CodecPreset* preset = nullptr;
      if (!videoLabel.empty()) {
        preset = codecs.find(videoLabel);
        if (preset == nullptr) {
          throw UsageError("unknown --video preset '" + videoLabel + "'; known presets: " +
                           joined(codecs.labels()));
        }
      }
      if (!fs::is_directory(encodeIn)) {
        err << "error: input directory " << encodeIn << " does not exist\n";
        return kExitData;
      }
      const RawVolume raw = readRawVolumeDir(encodeIn);
      if (raw.nonFiniteCount > 0) {
        err << "warning: replaced " << raw.nonFiniteCount << " non-finite values with 0\n";
      }
      const auto manifest = encodeDataset(
          raw.field, encodeOut,
          EncodeOptions{fps, raw.nonFiniteCount, debugCounter, preset});
      std::uint64_t bytes = 0;
      for (const auto& f : manifest.mediaFiles()) bytes += fs::file_size(fs::path(encodeOut) / f);
      const double rawBytes = static_cast<double>(raw.field.dims().count()) * 4.0;
      const std::string label = preset ? "video:" + preset->encoder.label : "png-frames";
      out << label << " frames=" << manifest.dims.t << " bytes=" << bytes
          << " ratioVsRaw=" << compressionRatio(rawBytes, static_cast<double>(bytes)) << ":1";
      if (!preset) {
        const Field4D decoded = decodeDataset(fs::path(encodeOut) / kManifestFile);
        out << " mae=" << mae(raw.field.values(), decoded.values())
            << " maxAbsError=" << maxAbsError(raw.field.values(), decoded.values());
      }
      out << " -> " << (fs::path(encodeOut) / kManifestFile).string() << "\n";
    } else if (*decode) {
      CodecRegistry codecs = loadCodecs(codecConfig);
      const Field4D field = decodeDataset(manifestPath, &codecs);
      writeRawVolumeDir(field, decodeOut);
      const auto& d = field.dims();
      out << "decoded " << d.t << "x" << d.z << "x" << d.y << "x" << d.x << " -> " << decodeOut
          << "\n";
    } else if (*metrics) {
      CodecRegistry codecs = loadCodecs(codecConfig);
      std::vector<std::string> variants;
      std::stringstream ss(variantsText);
      for (std::string v; std::getline(ss, v, ',');) {
        if (!v.empty()) variants.push_back(v);
      }
      if (variants.empty()) throw UsageError("--variants lists no variants");
      for (const auto& v : variants) {
        if (v.starts_with(kVariantVideoPrefix) && !codecs.find(v.substr(6))) {
          throw UsageError("unknown video preset in '" + v + "'; known presets: " +
                           joined(codecs.labels()));
        }
      }
      const RawVolume raw = readRawVolumeDir(metricsIn);
      fs::path work = workDir.empty() ? fs::temp_directory_path() /
                                            ("voxcast-metrics-" + std::to_string(::getpid()))
                                      : fs::path(workDir);
      const auto report =
          buildReport(raw.field, variants, ReportOptions{work, &codecs, fps});
      if (workDir.empty()) fs::remove_all(work);
      writeReportText(report, out);
      if (!csvPath.empty()) {
        std::ofstream csv(csvPath);
        if (!csv) fail(ErrorCode::kIo, "cannot create " + csvPath);
        writeReportCsv(report, csv);
      }
    } else if (*serve) {
      const auto [host, port] = parseListen(listen);
      DatasetServer server(ServerConfig{root, host, port, &out});
      server.run();
    } else if (*fixture) {
      const auto v = parseExtents(volumeDims, 3, "ZxYxX (e.g. 24x64x64)");
      const auto layout = computeLayout(v[0], v[1], v[2]);
      std::ofstream file(fixtureOut);
      if (!file) fail(ErrorCode::kIo, "cannot create " + fixtureOut);
      file << mappingFixture(layout, fixtureCount, fixtureSeed);
      out << "wrote " << fixtureCount << " mappings -> " << fixtureOut << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << errorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kToolUnavailable ? kExitEnvironment : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace voxcast::cli
