#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "stub_specs.hpp"
#include "temp_dir.hpp"
#include "voxcast/container.hpp"
#include "voxcast/raw_volume.hpp"

using namespace voxcast;
using voxcast::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result runCli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fileBytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("synth parses TxZxYxX and writes a raw volume") {
  TempDir dir;
  const auto r = runCli({"synth", "--seed", "3", "--dims", "4x6x16x16", "--out", (dir / "raw").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("dims 4x6x16x16") != std::string::npos);
  CHECK(readRawHeader(dir / "raw" / kRawHeaderFile).dims == Dims4{4, 6, 16, 16});
}

TEST_CASE("synth rejects malformed dims with the expected pattern") {
  TempDir dir;
  for (const char* dims : {"4x6", "4x6x16x16x2", "4x0x16x16", "axbxcxd"}) {
    CAPTURE(dims);
    const auto r = runCli({"synth", "--dims", dims, "--out", (dir / "raw").string()});
    CHECK(r.code == cli::kExitUsage);
  }
  CHECK(runCli({"synth", "--dims", "4x6", "--out", "x"}).err.find("TxZxYxX") != std::string::npos);
  CHECK(runCli({"synth", "--out", "x"}).code == cli::kExitUsage);
  CHECK(runCli({}).code == cli::kExitUsage);
}

TEST_CASE("synth is deterministic") {
  TempDir dir;
  runCli({"synth", "--seed", "9", "--dims", "2x3x5x5", "--out", (dir / "a").string()});
  runCli({"synth", "--seed", "9", "--dims", "2x3x5x5", "--out", (dir / "b").string()});
  CHECK(fileBytes(dir / "a" / kRawDataFile) == fileBytes(dir / "b" / kRawDataFile));
  CHECK(fileBytes(dir / "a" / kRawHeaderFile) == fileBytes(dir / "b" / kRawHeaderFile));
}

TEST_CASE("encode then decode round trip") {
  TempDir dir;
  REQUIRE(runCli({"synth", "--dims", "3x6x8x8", "--out", (dir / "raw").string()}).code == 0);
  const auto enc = runCli({"encode", "--in", (dir / "raw").string(), "--out", (dir / "ds").string()});
  REQUIRE(enc.code == 0);
  CHECK(enc.out.find("png-frames frames=3") != std::string::npos);
  CHECK(enc.out.find("ratioVsRaw=") != std::string::npos);
  const auto m = readManifest(dir / "ds" / kManifestFile);
  CHECK(m.fps == 10.0);

  const auto dec = runCli({"decode", "--manifest", (dir / "ds" / kManifestFile).string(), "--out",
                           (dir / "back").string()});
  REQUIRE(dec.code == 0);
  const auto original = readRawVolumeDir(dir / "raw").field;
  const auto back = readRawVolumeDir(dir / "back").field;
  const Quantizer q = makeQuantizer(original);
  REQUIRE(back.dims() == original.dims());
  for (std::size_t i = 0; i < original.values().size(); ++i) {
    // decoded values pass through binary32 on the way to disk
    REQUIRE(std::abs(back.values()[i] - original.values()[i]) <= q.range() / 510.0 + 1e-6);
  }
}

TEST_CASE("encode flags") {
  TempDir dir;
  REQUIRE(runCli({"synth", "--dims", "2x2x3x3", "--out", (dir / "raw").string()}).code == 0);
  SUBCASE("custom fps and debug counter") {
    REQUIRE(runCli({"encode", "--in", (dir / "raw").string(), "--out", (dir / "ds").string(),
                    "--fps", "24", "--debug-frame-counter"})
                .code == 0);
    const auto m = readManifest(dir / "ds" / kManifestFile);
    CHECK(m.fps == 24.0);
    CHECK(m.debugFrameCounter.has_value());
  }
  SUBCASE("unknown video label lists the known ones") {
    const auto r = runCli({"encode", "--in", (dir / "raw").string(), "--out", (dir / "ds").string(),
                           "--video", "vp99"});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("theora-q2") != std::string::npos);
    CHECK(r.err.find("x264") != std::string::npos);
  }
  SUBCASE("missing input directory is a data error") {
    const auto r = runCli({"encode", "--in", (dir / "absent").string(), "--out", (dir / "ds").string()});
    CHECK(r.code == cli::kExitData);
    CHECK(r.err.find("does not exist") != std::string::npos);
  }
  SUBCASE("unavailable encoder tool is an environment error") {
    std::ofstream(dir / "codecs.json") << R"({"presets": [{"label": "gone", "extension": "ogv",
      "encode": "voxcast-no-such-tool-xyz {width} {height} {fps} {output}",
      "decode": "voxcast-no-such-tool-xyz {input}"}]})";
    const auto r = runCli({"encode", "--in", (dir / "raw").string(), "--out", (dir / "ds").string(),
                           "--video", "gone", "--codec-config", (dir / "codecs.json").string()});
    CHECK(r.code == cli::kExitEnvironment);
    CHECK(r.err.find("not installed") != std::string::npos);
  }
  SUBCASE("video through a configured stub codec") {
    const auto spec = voxcast::testing::stubPreset();
    std::ofstream(dir / "codecs.json")
        << R"({"presets": [{"label": "stub", "extension": "rgb", "encode": ")"
        << spec.encoder.commandTemplate << R"(", "decode": ")" << spec.decoder.commandTemplate
        << R"("}]})";
    const auto r = runCli({"encode", "--in", (dir / "raw").string(), "--out", (dir / "ds").string(),
                           "--video", "stub", "--codec-config", (dir / "codecs.json").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("video:stub") != std::string::npos);
    CHECK(std::holds_alternative<VideoMedia>(readManifest(dir / "ds" / kManifestFile).media));
    CHECK(runCli({"decode", "--manifest", (dir / "ds" / kManifestFile).string(), "--out",
                  (dir / "back").string(), "--codec-config", (dir / "codecs.json").string()})
              .code == 0);
  }
}

TEST_CASE("decode of a missing manifest fails") {
  TempDir dir;
  const auto r = runCli({"decode", "--manifest", (dir / "none.json").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitData);
}

TEST_CASE("metrics writes the documented CSV") {
  TempDir dir;
  REQUIRE(runCli({"synth", "--dims", "2x6x8x8", "--out", (dir / "raw").string()}).code == 0);
  const auto r = runCli({"metrics", "--in", (dir / "raw").string(), "--variants",
                         "raw-f32,quantized-8bit,png-frames,video:theora-q2", "--csv",
                         (dir / "r.csv").string(), "--work", (dir / "work").string()});
  REQUIRE(r.code == 0);
  std::ifstream csv(dir / "r.csv");
  std::string header, line;
  std::getline(csv, header);
  CHECK(header == "label,byteVolume,mae,maxAbsError,ratioVsRaw");
  std::vector<std::string> labels;
  while (std::getline(csv, line)) labels.push_back(line.substr(0, line.find(',')));
  CHECK(labels == std::vector<std::string>{"raw-f32", "quantized-8bit", "png-frames", "video:theora-q2"});
  CHECK(r.out.find("variant") != std::string::npos);

  CHECK(runCli({"metrics", "--in", (dir / "raw").string(), "--variants", "video:nope"}).code ==
        cli::kExitUsage);
}

TEST_CASE("mapping-fixture exports voxel to pixel samples") {
  TempDir dir;
  const auto r = runCli({"mapping-fixture", "--dims", "24x64x64", "--count", "50", "--out",
                         (dir / "fixture.json").string()});
  REQUIRE(r.code == 0);
  const std::string text = fileBytes(dir / "fixture.json");
  CHECK(text.find("\"frameWidth\": 192") != std::string::npos);
  CHECK(text.find("\"mappings\"") != std::string::npos);
}

TEST_CASE("serve prints the listening address") {
  TempDir dir;
  const std::string cmd = "timeout 2 " + std::string(VOXCAST_CLI) + " serve --root " +
                          dir.path().string() + " --listen 127.0.0.1:0";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char line[256] = {};
  const bool got = std::fgets(line, sizeof(line), pipe) != nullptr;
  ::pclose(pipe);
  REQUIRE(got);
  CHECK(std::string(line).rfind("listening on http://127.0.0.1:", 0) == 0);
}
