#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxcast/codec.hpp"
#include "voxcast/field.hpp"

namespace voxcast {

/// Mean of |a_i - b_i|. Lengths must match and be non-zero.
double mae(std::span<const double> a, std::span<const double> b);
double maxAbsError(std::span<const double> a, std::span<const double> b);

/// original / encoded; encoded must be positive.
double compressionRatio(double originalBytes, double encodedBytes);

struct ReportRow {
  std::string label;
  /// Unset when the variant could not be produced (e.g. codec tool missing).
  std::optional<std::string> unavailable;
  std::uint64_t byteVolume = 0;
  double maeVsOriginal = 0.0;
  double maxAbsError = 0.0;
  double compressionRatioVsRaw = 0.0;
};

struct EncodingReport {
  std::vector<ReportRow> rows;
};

struct ReportOptions {
  /// Scratch directory for PNG frames and video files.
  std::filesystem::path workDir;
  const CodecRegistry* codecs = nullptr;
  double fps = 10.0;
};

inline constexpr const char* kVariantRaw = "raw-f32";
inline constexpr const char* kVariantQuantized = "quantized-8bit";
inline constexpr const char* kVariantPng = "png-frames";
inline constexpr const char* kVariantVideoPrefix = "video:";

/// One row per variant in request order. Variants: raw-f32, quantized-8bit,
/// png-frames, video:<preset label>. Errors are measured in field units over
/// every voxel against `field`.
EncodingReport buildReport(const Field4D& field, const std::vector<std::string>& variants,
                           const ReportOptions& options);

inline constexpr const char* kReportCsvHeader = "label,byteVolume,mae,maxAbsError,ratioVsRaw";

void writeReportCsv(const EncodingReport& report, std::ostream& out);
void writeReportText(const EncodingReport& report, std::ostream& out);

}  // namespace voxcast
