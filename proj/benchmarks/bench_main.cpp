#include <benchmark/benchmark.h>

#include <filesystem>
#include <unistd.h>

#include "voxcast/mosaic.hpp"
#include "voxcast/png_io.hpp"
#include "voxcast/quantizer.hpp"
#include "voxcast/synth.hpp"

using namespace voxcast;

namespace {

// One time step of a (z, 128, 128) field.
Field4D benchField(std::size_t z) { return synthesizeField(42, {1, z, 128, 128}); }

void BM_QuantizeStep(benchmark::State& state) {
  const Field4D field = benchField(static_cast<std::size_t>(state.range(0)));
  const Quantizer q = makeQuantizer(field);
  for (auto _ : state) benchmark::DoNotOptimize(quantizeStep(field, 0, q));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(field.values().size()));
}
BENCHMARK(BM_QuantizeStep)->Arg(12)->Arg(48);

void BM_PackFrame(benchmark::State& state) {
  const Field4D field = benchField(static_cast<std::size_t>(state.range(0)));
  const QuantizedFrame codes = quantizeStep(field, 0, makeQuantizer(field));
  const MosaicLayout layout = computeLayout(codes.z, codes.y, codes.x);
  for (auto _ : state) benchmark::DoNotOptimize(packFrame(codes, layout));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(codes.codes.size()));
}
BENCHMARK(BM_PackFrame)->Arg(12)->Arg(48);

void BM_UnpackFrame(benchmark::State& state) {
  const Field4D field = benchField(static_cast<std::size_t>(state.range(0)));
  const QuantizedFrame codes = quantizeStep(field, 0, makeQuantizer(field));
  const MosaicLayout layout = computeLayout(codes.z, codes.y, codes.x);
  const RgbFrame frame = packFrame(codes, layout);
  for (auto _ : state) benchmark::DoNotOptimize(unpackFrame(frame, layout));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(codes.codes.size()));
}
BENCHMARK(BM_UnpackFrame)->Arg(12)->Arg(48);

void BM_PngWrite(benchmark::State& state) {
  const Field4D field = benchField(48);
  const QuantizedFrame codes = quantizeStep(field, 0, makeQuantizer(field));
  const RgbFrame frame = packFrame(codes, computeLayout(codes.z, codes.y, codes.x));
  const auto file = std::filesystem::temp_directory_path() /
                    ("voxcast-bench-" + std::to_string(::getpid()) + ".png");
  for (auto _ : state) writeFramePixels(frame, file);
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(frame.pixels.size()));
  std::filesystem::remove(file);
}
BENCHMARK(BM_PngWrite)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
