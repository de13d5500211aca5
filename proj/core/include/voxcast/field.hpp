#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace voxcast {

/// Extent of a 4D field: time, altitude (z), latitude (y), longitude (x).
struct Dims4 {
  std::size_t t = 1;
  std::size_t z = 1;
  std::size_t y = 1;
  std::size_t x = 1;

  std::size_t voxelsPerStep() const noexcept { return z * y * x; }
  std::size_t count() const noexcept { return t * z * y * x; }

  friend bool operator==(const Dims4&, const Dims4&) = default;
};

/// Time-ordered 3D scalar raster. Values are stored t-major, then z, then y,
/// with x varying fastest.
class Field4D {
 public:
  Field4D() = default;
  Field4D(Dims4 dims, std::vector<double> values, std::string name = {},
          std::string units = {});

  /// Zero-filled field of the given extent.
  static Field4D zeros(Dims4 dims, std::string name = {}, std::string units = {});

  const Dims4& dims() const noexcept { return dims_; }
  const std::string& name() const noexcept { return name_; }
  const std::string& units() const noexcept { return units_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Voxels of a single time step.
  std::span<const double> step(std::size_t t) const;
  std::span<double> step(std::size_t t);

  std::size_t index(std::size_t t, std::size_t z, std::size_t y,
                    std::size_t x) const noexcept {
    return ((t * dims_.z + z) * dims_.y + y) * dims_.x + x;
  }
  double at(std::size_t t, std::size_t z, std::size_t y, std::size_t x) const {
    return values_[index(t, z, y, x)];
  }

  friend bool operator==(const Field4D&, const Field4D&) = default;

 private:
  Dims4 dims_;
  std::vector<double> values_;
  std::string name_;
  std::string units_;
};

/// Throws kContractViolation unless every extent is at least one.
void requireValidDims(const Dims4& dims);

}  // namespace voxcast
