#include "voxcast/synth.hpp"

#include <algorithm>
#include <cmath>

#include "voxcast/error.hpp"

namespace voxcast {

std::vector<GaussianBlob> describeBlobs(std::uint64_t seed, const Dims4& dims,
                                        std::size_t blobs) {
  requireValidDims(dims);
  if (blobs == 0) fail(ErrorCode::kContractViolation, "blob count must be >= 1");
  SplitMix64 rng(seed);
  const double extent[3] = {static_cast<double>(dims.z), static_cast<double>(dims.y),
                            static_cast<double>(dims.x)};
  std::vector<GaussianBlob> out(blobs);
  for (auto& b : out) {
    for (int a = 0; a < 3; ++a) {
      b.center[a] = rng.uniform(0.15, 0.85) * (extent[a] - 1.0);
      b.velocity[a] = rng.uniform(-0.04, 0.04) * extent[a];
      b.sigma[a] = std::max(2.0, rng.uniform(0.12, 0.25) * extent[a]);
    }
    b.amplitude = rng.uniform(0.6, 1.0);
  }
  return out;
}

Field4D synthesizeField(std::uint64_t seed, const Dims4& dims, std::size_t blobs) {
  const auto params = describeBlobs(seed, dims, blobs);
  Field4D field = Field4D::zeros(dims, "synthetic-cloud-fraction", "1");
  const std::size_t extent[3] = {dims.z, dims.y, dims.x};

  // Separable evaluation: per-axis profiles for each blob at each step.
  std::vector<std::vector<double>> profile[3];
  for (int a = 0; a < 3; ++a) profile[a].assign(params.size(), std::vector<double>(extent[a]));

  auto values = field.values();
  for (std::size_t t = 0; t < dims.t; ++t) {
    for (std::size_t b = 0; b < params.size(); ++b) {
      for (int a = 0; a < 3; ++a) {
        const double c = params[b].centerAt(a, t);
        const double s = params[b].sigma[a];
        for (std::size_t i = 0; i < extent[a]; ++i) {
          const double d = (static_cast<double>(i) - c) / s;
          profile[a][b][i] = std::exp(-0.5 * d * d);
        }
      }
    }
    std::size_t idx = t * dims.voxelsPerStep();
    for (std::size_t z = 0; z < dims.z; ++z) {
      for (std::size_t y = 0; y < dims.y; ++y) {
        for (std::size_t x = 0; x < dims.x; ++x, ++idx) {
          double v = 0.0;
          for (std::size_t b = 0; b < params.size(); ++b) {
            v += params[b].amplitude * profile[0][b][z] * profile[1][b][y] * profile[2][b][x];
          }
          // binary32-representable so the raw interchange round trip is exact.
          values[idx] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
      }
    }
  }
  return field;
}

}  // namespace voxcast
