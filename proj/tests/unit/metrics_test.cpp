#include <doctest.h>

#include <sstream>

#include "stub_specs.hpp"
#include "temp_dir.hpp"
#include "voxcast/error.hpp"
#include "voxcast/metrics.hpp"
#include "voxcast/synth.hpp"

using namespace voxcast;
using namespace voxcast::testing;

TEST_CASE("mae examples") {
  const std::vector<double> a{0.3, -2.0, 7.5};
  CHECK(mae(a, a) == 0.0);
  CHECK(mae(std::vector<double>{0, 1}, std::vector<double>{0.5, 0.5}) == 0.5);
  CHECK(mae(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 5}) == 1.0);
  CHECK(maxAbsError(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 5}) == 2.0);
  CHECK_THROWS_AS(mae(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("compressionRatio examples") {
  CHECK(compressionRatio(5.0e9, 12.5e6) == 400.0);
  CHECK(compressionRatio(777, 777) == 1.0);
  CHECK(compressionRatio(1000, 250) == 4.0);
  CHECK_THROWS_AS(compressionRatio(1000, 0), Error);
}

TEST_CASE("report rows for the built-in variants") {
  TempDir dir;
  const Field4D f = synthesizeField(6, {4, 6, 16, 16});
  const auto report = buildReport(f, {"raw-f32", "quantized-8bit", "png-frames"},
                                  ReportOptions{dir.path(), nullptr, 10});
  REQUIRE(report.rows.size() == 3);
  const auto& raw = report.rows[0];
  const auto& quant = report.rows[1];
  const auto& png = report.rows[2];
  CHECK(raw.label == "raw-f32");
  CHECK(raw.byteVolume == 4 * 6 * 16 * 16 * 4);
  CHECK(raw.byteVolume == 24576);
  CHECK(raw.maeVsOriginal == 0.0);
  CHECK(raw.compressionRatioVsRaw == 1.0);
  CHECK(quant.byteVolume * 4 == raw.byteVolume);
  CHECK(quant.compressionRatioVsRaw == 4.0);
  CHECK(png.maeVsOriginal == quant.maeVsOriginal);
  CHECK(png.maxAbsError == quant.maxAbsError);
  CHECK(png.byteVolume < quant.byteVolume);
  for (const auto& row : report.rows) CHECK(row.compressionRatioVsRaw > 0.0);
}

TEST_CASE("quantized MAE of a uniform random field is near 1/1020 of range") {
  TempDir dir;
  SplitMix64 rng(77);
  std::vector<double> values(2 * 10 * 100 * 100);
  for (auto& v : values) v = static_cast<float>(rng.uniform());
  const Field4D f({2, 10, 100, 100}, values);
  const auto report =
      buildReport(f, {"quantized-8bit", "png-frames"}, ReportOptions{dir.path(), nullptr, 10});
  const double range = makeQuantizer(f).range();
  CHECK(report.rows[0].maeVsOriginal / range == doctest::Approx(1.0 / 1020.0).epsilon(0.10));
  CHECK(report.rows[1].maeVsOriginal == report.rows[0].maeVsOriginal);
}

TEST_CASE("video variants use the codec registry") {
  TempDir dir;
  const Field4D f = synthesizeField(2, {3, 6, 8, 8});
  CodecRegistry codecs;
  codecs.add(stubPreset());
  codecs.add(CodecPreset{
      EncoderSpec{"absent", "voxcast-no-such-tool-xyz {width} {height} {fps} {output}", "ogv"},
      DecoderSpec{"absent", "voxcast-no-such-tool-xyz {input}"}});
  const auto report = buildReport(f, {"png-frames", "video:stub", "video:absent"},
                                  ReportOptions{dir.path(), &codecs, 10});
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[1].label == "video:stub");
  CHECK_FALSE(report.rows[1].unavailable.has_value());
  CHECK(report.rows[1].maeVsOriginal == report.rows[0].maeVsOriginal);
  CHECK(report.rows[1].byteVolume == 3 * computeLayout(6, 8, 8).frameBytes());
  CHECK(report.rows[2].unavailable == std::optional<std::string>("tool unavailable"));

  CHECK_THROWS_AS(buildReport(f, {"video:nope"}, ReportOptions{dir.path(), &codecs, 10}), Error);
  CHECK_THROWS_AS(buildReport(f, {"jpeg"}, ReportOptions{dir.path(), &codecs, 10}), Error);
}

TEST_CASE("CSV and text rendering") {
  EncodingReport report;
  report.rows.push_back(ReportRow{"raw-f32", std::nullopt, 1000, 0.0, 0.0, 1.0});
  report.rows.push_back(ReportRow{"quantized-8bit", std::nullopt, 250, 0.5, 1.25, 4.0});
  report.rows.push_back(ReportRow{"video:theora-q2", std::string("tool unavailable"), 0, 0, 0, 0});
  std::ostringstream csv;
  writeReportCsv(report, csv);
  CHECK(csv.str() ==
        "label,byteVolume,mae,maxAbsError,ratioVsRaw\n"
        "raw-f32,1000,0,0,1\n"
        "quantized-8bit,250,0.5,1.25,4\n"
        "video:theora-q2,,,,\n");
  std::ostringstream text;
  writeReportText(report, text);
  CHECK(text.str().find("tool unavailable") != std::string::npos);
  CHECK(text.str().find("4:1") != std::string::npos);
}
