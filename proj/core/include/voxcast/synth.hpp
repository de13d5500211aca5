#pragma once

#include <cstdint>
#include <vector>

#include "voxcast/field.hpp"

namespace voxcast {

/// SplitMix64 generator. Increment 0x9E3779B97F4A7C15, output mixing
/// multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB. Chosen because the
/// sequence is fully specified and therefore reproducible on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Axis-aligned Gaussian whose centre moves linearly in time. Coordinates are
/// in voxel units, ordered z, y, x.
struct GaussianBlob {
  double center[3];
  double velocity[3];  // voxels per time step
  double sigma[3];
  double amplitude;

  double centerAt(int axis, std::size_t t) const noexcept {
    return center[axis] + velocity[axis] * static_cast<double>(t);
  }
};

inline constexpr std::size_t kDefaultBlobs = 6;

/// The blob parameters synthesizeField draws for (seed, dims, blobs).
std::vector<GaussianBlob> describeBlobs(std::uint64_t seed, const Dims4& dims,
                                        std::size_t blobs);

/// Smooth cloud-fraction-like test field: the sum of `blobs` drifting
/// Gaussians clamped to [0, 1]. Bit-identical for identical arguments.
Field4D synthesizeField(std::uint64_t seed, const Dims4& dims,
                        std::size_t blobs = kDefaultBlobs);

}  // namespace voxcast
