#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "voxcast/field.hpp"

namespace voxcast {

/// Affine map between field values and 8-bit codes over [vmin, vmax].
/// A constant field yields vmin == vmax; such a quantizer is degenerate and
/// maps every value to code 0.
struct Quantizer {
  double vmin = 0.0;
  double vmax = 0.0;

  bool degenerate() const noexcept { return !(vmax > vmin); }
  double range() const noexcept { return vmax - vmin; }

  /// Scaled value rounded half away from zero and clamped to [0, 255].
  std::uint8_t quantize(double v) const noexcept;
  double dequantize(std::uint8_t code) const noexcept;

  friend bool operator==(const Quantizer&, const Quantizer&) = default;
};

/// Single global scale spanning the minimum and maximum of the whole field.
Quantizer makeQuantizer(const Field4D& field);
Quantizer makeQuantizer(std::span<const double> values);

/// 8-bit codes for one time step, z-major then y then x.
struct QuantizedFrame {
  std::size_t z = 0;
  std::size_t y = 0;
  std::size_t x = 0;
  std::vector<std::uint8_t> codes;

  std::size_t index(std::size_t zi, std::size_t yi, std::size_t xi) const noexcept {
    return (zi * y + yi) * x + xi;
  }

  friend bool operator==(const QuantizedFrame&, const QuantizedFrame&) = default;
};

QuantizedFrame quantizeStep(const Field4D& field, std::size_t t, const Quantizer& q);

/// Writes the dequantized codes of `frame` into time step `t` of `field`.
void dequantizeInto(const QuantizedFrame& frame, const Quantizer& q, Field4D& field,
                    std::size_t t);

}  // namespace voxcast
