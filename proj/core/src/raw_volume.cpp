#include "voxcast/raw_volume.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "voxcast/error.hpp"

namespace voxcast {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t dimField(const json& dims, const char* key) {
  if (!dims.contains(key) || !dims[key].is_number_integer() || dims[key].get<long long>() < 1) {
    fail(ErrorCode::kCorruptInput, std::string("header dims.") + key + " must be an integer >= 1");
  }
  return dims[key].get<std::size_t>();
}

std::uint32_t loadLE32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void storeLE32(std::uint32_t v, char* p) {
  p[0] = static_cast<char>(v & 0xffu);
  p[1] = static_cast<char>((v >> 8) & 0xffu);
  p[2] = static_cast<char>((v >> 16) & 0xffu);
  p[3] = static_cast<char>((v >> 24) & 0xffu);
}

}  // namespace

RawVolumeHeader readRawHeader(const fs::path& headerPath) {
  std::ifstream in(headerPath);
  if (!in) fail(ErrorCode::kIo, "cannot open header " + headerPath.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kCorruptInput, "header " + headerPath.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc["dims"].is_object()) {
    fail(ErrorCode::kCorruptInput, "header " + headerPath.string() + " lacks a dims object");
  }
  RawVolumeHeader header;
  const auto& dims = doc["dims"];
  header.dims = {dimField(dims, "t"), dimField(dims, "z"), dimField(dims, "y"),
                 dimField(dims, "x")};
  header.dtype = doc.value("dtype", "");
  header.order = doc.value("order", "");
  header.name = doc.value("name", "");
  header.units = doc.value("units", "");
  if (header.dtype != "f32le") {
    fail(ErrorCode::kUnsupportedFormat, "unsupported dtype '" + header.dtype + "' (expected f32le)");
  }
  if (header.order != "tzyx") {
    fail(ErrorCode::kUnsupportedFormat, "unsupported order '" + header.order + "' (expected tzyx)");
  }
  return header;
}

RawVolume readRawVolume(const fs::path& headerPath, const fs::path& dataPath) {
  const RawVolumeHeader header = readRawHeader(headerPath);
  const std::uintmax_t expected = static_cast<std::uintmax_t>(header.dims.count()) * 4u;

  std::error_code ec;
  const std::uintmax_t actual = fs::file_size(dataPath, ec);
  if (ec) fail(ErrorCode::kIo, "cannot stat data file " + dataPath.string() + ": " + ec.message());
  if (actual != expected) {
    fail(ErrorCode::kCorruptInput, "data file " + dataPath.string() + " holds " +
                                       std::to_string(actual) + " bytes, expected " +
                                       std::to_string(expected));
  }

  std::ifstream in(dataPath, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open data file " + dataPath.string());
  std::vector<unsigned char> bytes(expected);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::uintmax_t>(in.gcount()) != expected) {
    fail(ErrorCode::kCorruptInput, "short read from " + dataPath.string());
  }

  std::vector<double> values(header.dims.count());
  std::size_t nonFinite = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float f = std::bit_cast<float>(loadLE32(&bytes[i * 4]));
    if (std::isfinite(f)) {
      values[i] = f;
    } else {
      values[i] = 0.0;
      ++nonFinite;
    }
  }
  return RawVolume{Field4D(header.dims, std::move(values), header.name, header.units),
                   nonFinite};
}

RawVolume readRawVolumeDir(const fs::path& dir) {
  return readRawVolume(dir / kRawHeaderFile, dir / kRawDataFile);
}

void writeRawVolume(const Field4D& field, const fs::path& headerPath, const fs::path& dataPath) {
  const auto& d = field.dims();
  requireValidDims(d);
  const json header = {
      {"dims", {{"t", d.t}, {"z", d.z}, {"y", d.y}, {"x", d.x}}},
      {"dtype", "f32le"},
      {"order", "tzyx"},
      {"name", field.name()},
      {"units", field.units()},
  };
  {
    std::ofstream out(headerPath);
    if (!out) fail(ErrorCode::kIo, "cannot create header " + headerPath.string());
    out << header.dump(2) << '\n';
    if (!out) fail(ErrorCode::kIo, "failed writing header " + headerPath.string());
  }

  std::vector<char> bytes(field.values().size() * 4);
  for (std::size_t i = 0; i < field.values().size(); ++i) {
    storeLE32(std::bit_cast<std::uint32_t>(static_cast<float>(field.values()[i])), &bytes[i * 4]);
  }
  std::ofstream out(dataPath, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot create data file " + dataPath.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "failed writing data file " + dataPath.string());
}

void writeRawVolumeDir(const Field4D& field, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
  writeRawVolume(field, dir / kRawHeaderFile, dir / kRawDataFile);
}

}  // namespace voxcast
