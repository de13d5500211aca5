#include "voxcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <system_error>

#include "voxcast/container.hpp"
#include "voxcast/error.hpp"
#include "voxcast/quantizer.hpp"

namespace voxcast {
namespace fs = std::filesystem;

namespace {

void requireComparable(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::kContractViolation, "error metric over sequences of length " +
                                            std::to_string(a.size()) + " and " +
                                            std::to_string(b.size()));
  }
  if (a.empty()) fail(ErrorCode::kContractViolation, "error metric over empty sequences");
}

std::uint64_t directoryBytes(const fs::path& dir, const std::vector<std::string>& files) {
  std::uint64_t total = 0;
  for (const auto& f : files) total += fs::file_size(dir / f);
  return total;
}

void fillErrors(ReportRow& row, const Field4D& original, const Field4D& decoded) {
  row.maeVsOriginal = mae(original.values(), decoded.values());
  row.maxAbsError = maxAbsError(original.values(), decoded.values());
}

std::string formatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double mae(std::span<const double> a, std::span<const double> b) {
  requireComparable(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

double maxAbsError(std::span<const double> a, std::span<const double> b) {
  requireComparable(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double compressionRatio(double originalBytes, double encodedBytes) {
  if (!(encodedBytes > 0.0)) {
    fail(ErrorCode::kContractViolation, "compression ratio needs a positive encoded size");
  }
  return originalBytes / encodedBytes;
}

EncodingReport buildReport(const Field4D& field, const std::vector<std::string>& variants,
                           const ReportOptions& options) {
  const auto& d = field.dims();
  const std::uint64_t rawBytes = static_cast<std::uint64_t>(d.count()) * sizeof(float);
  const Quantizer q = makeQuantizer(field);

  EncodingReport report;
  for (const auto& variant : variants) {
    ReportRow row;
    row.label = variant;
    if (variant == kVariantRaw) {
      // binary32 storage of the original values.
      row.byteVolume = rawBytes;
      Field4D stored = field;
      for (double& v : stored.values()) v = static_cast<float>(v);
      fillErrors(row, field, stored);
    } else if (variant == kVariantQuantized) {
      row.byteVolume = d.count();
      Field4D decoded = field;
      for (double& v : decoded.values()) v = q.dequantize(q.quantize(v));
      fillErrors(row, field, decoded);
    } else if (variant == kVariantPng) {
      const fs::path dir = options.workDir / "png-frames";
      const auto manifest = encodeDataset(field, dir, EncodeOptions{.fps = options.fps});
      row.byteVolume = directoryBytes(dir, manifest.mediaFiles());
      fillErrors(row, field, decodeDataset(dir / kManifestFile));
    } else if (variant.starts_with(kVariantVideoPrefix)) {
      const std::string label = variant.substr(std::char_traits<char>::length(kVariantVideoPrefix));
      const CodecPreset* preset = options.codecs ? options.codecs->find(label) : nullptr;
      if (preset == nullptr) {
        fail(ErrorCode::kContractViolation, "unknown codec preset '" + label + "'");
      }
      if (!toolAvailable(preset->encoder.commandTemplate) ||
          !toolAvailable(preset->decoder.commandTemplate)) {
        row.unavailable = "tool unavailable";
        report.rows.push_back(std::move(row));
        continue;
      }
      const fs::path dir = options.workDir / ("video-" + label);
      const auto manifest =
          encodeDataset(field, dir, EncodeOptions{.fps = options.fps, .video = preset});
      row.byteVolume = directoryBytes(dir, manifest.mediaFiles());
      fillErrors(row, field, decodeDataset(dir / kManifestFile, options.codecs));
    } else {
      fail(ErrorCode::kContractViolation,
           "unknown variant '" + variant + "' (expected raw-f32, quantized-8bit, png-frames or "
                                           "video:<label>)");
    }
    row.compressionRatioVsRaw = compressionRatio(static_cast<double>(rawBytes),
                                                 static_cast<double>(row.byteVolume));
    report.rows.push_back(std::move(row));
  }
  return report;
}

void writeReportCsv(const EncodingReport& report, std::ostream& out) {
  out << kReportCsvHeader << '\n';
  for (const auto& row : report.rows) {
    out << row.label;
    if (row.unavailable) {
      out << ",,,,\n";
      continue;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), ",%llu,%.17g,%.17g,%.9g\n",
                  static_cast<unsigned long long>(row.byteVolume), row.maeVsOriginal,
                  row.maxAbsError, row.compressionRatioVsRaw);
    out << buf;
  }
}

void writeReportText(const EncodingReport& report, std::ostream& out) {
  std::size_t width = 7;
  for (const auto& row : report.rows) width = std::max(width, row.label.size());
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %14s  %12s  %12s  %10s\n", static_cast<int>(width),
                "variant", "bytes", "MAE", "max error", "ratio");
  out << buf;
  for (const auto& row : report.rows) {
    if (row.unavailable) {
      std::snprintf(buf, sizeof(buf), "%-*s  %s\n", static_cast<int>(width), row.label.c_str(),
                    row.unavailable->c_str());
    } else {
      std::snprintf(buf, sizeof(buf), "%-*s  %14llu  %12s  %12s  %9s:1\n",
                    static_cast<int>(width), row.label.c_str(),
                    static_cast<unsigned long long>(row.byteVolume),
                    formatReal(row.maeVsOriginal).c_str(), formatReal(row.maxAbsError).c_str(),
                    formatReal(row.compressionRatioVsRaw).c_str());
    }
    out << buf;
  }
}

}  // namespace voxcast
