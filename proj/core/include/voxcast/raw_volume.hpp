#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "voxcast/field.hpp"

namespace voxcast {

/// Interchange header for a raw 4D volume: a small JSON document next to a
/// flat little-endian binary32 payload ordered t, z, y, x (x fastest).
struct RawVolumeHeader {
  Dims4 dims;
  std::string dtype = "f32le";
  std::string order = "tzyx";
  std::string name;
  std::string units;
};

struct RawVolume {
  Field4D field;
  /// NaN/Inf samples replaced by 0.0 while reading.
  std::size_t nonFiniteCount = 0;
};

inline constexpr const char* kRawHeaderFile = "header.json";
inline constexpr const char* kRawDataFile = "data.f32";

RawVolumeHeader readRawHeader(const std::filesystem::path& headerPath);

RawVolume readRawVolume(const std::filesystem::path& headerPath,
                        const std::filesystem::path& dataPath);

/// Reads header.json + data.f32 from `dir`.
RawVolume readRawVolumeDir(const std::filesystem::path& dir);

/// Values are narrowed to binary32. Output is byte-for-byte deterministic.
void writeRawVolume(const Field4D& field, const std::filesystem::path& headerPath,
                    const std::filesystem::path& dataPath);

void writeRawVolumeDir(const Field4D& field, const std::filesystem::path& dir);

}  // namespace voxcast
