#include "voxcast/quantizer.hpp"

#include <algorithm>
#include <cmath>

#include "voxcast/error.hpp"

namespace voxcast {

std::uint8_t Quantizer::quantize(double v) const noexcept {
  if (degenerate()) return 0;
  // std::round rounds half away from zero; NaN falls through to 0.
  const double scaled = std::round((v - vmin) * 255.0 / (vmax - vmin));
  if (!(scaled > 0.0)) return 0;
  if (scaled >= 255.0) return 255;
  return static_cast<std::uint8_t>(scaled);
}

double Quantizer::dequantize(std::uint8_t code) const noexcept {
  if (degenerate()) return vmin;
  return vmin + static_cast<double>(code) * (vmax - vmin) / 255.0;
}

Quantizer makeQuantizer(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::kContractViolation, "cannot scale an empty field");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return Quantizer{*lo, *hi};
}

Quantizer makeQuantizer(const Field4D& field) { return makeQuantizer(field.values()); }

QuantizedFrame quantizeStep(const Field4D& field, std::size_t t, const Quantizer& q) {
  const auto& d = field.dims();
  QuantizedFrame frame{d.z, d.y, d.x, {}};
  const auto src = field.step(t);
  frame.codes.resize(src.size());
  std::transform(src.begin(), src.end(), frame.codes.begin(),
                 [&q](double v) { return q.quantize(v); });
  return frame;
}

void dequantizeInto(const QuantizedFrame& frame, const Quantizer& q, Field4D& field,
                    std::size_t t) {
  const auto& d = field.dims();
  if (frame.z != d.z || frame.y != d.y || frame.x != d.x ||
      frame.codes.size() != d.voxelsPerStep()) {
    fail(ErrorCode::kDimensionMismatch, "quantized frame does not match field dims");
  }
  auto dst = field.step(t);
  std::transform(frame.codes.begin(), frame.codes.end(), dst.begin(),
                 [&q](std::uint8_t c) { return q.dequantize(c); });
}

}  // namespace voxcast
