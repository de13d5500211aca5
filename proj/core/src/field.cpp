#include "voxcast/field.hpp"

#include <string>
#include <utility>

#include "voxcast/error.hpp"

namespace voxcast {

void requireValidDims(const Dims4& dims) {
  if (dims.t == 0 || dims.z == 0 || dims.y == 0 || dims.x == 0) {
    fail(ErrorCode::kContractViolation,
         "field dimensions must all be >= 1, got " + std::to_string(dims.t) + "x" +
             std::to_string(dims.z) + "x" + std::to_string(dims.y) + "x" +
             std::to_string(dims.x));
  }
}

Field4D::Field4D(Dims4 dims, std::vector<double> values, std::string name,
                 std::string units)
    : dims_(dims), values_(std::move(values)), name_(std::move(name)),
      units_(std::move(units)) {
  requireValidDims(dims_);
  if (values_.size() != dims_.count()) {
    fail(ErrorCode::kContractViolation,
         "field holds " + std::to_string(values_.size()) + " values, dims require " +
             std::to_string(dims_.count()));
  }
}

Field4D Field4D::zeros(Dims4 dims, std::string name, std::string units) {
  requireValidDims(dims);
  return Field4D(dims, std::vector<double>(dims.count(), 0.0), std::move(name),
                 std::move(units));
}

std::span<const double> Field4D::step(std::size_t t) const {
  if (t >= dims_.t) fail(ErrorCode::kOutOfBounds, "time step out of range");
  return std::span<const double>(values_).subspan(t * dims_.voxelsPerStep(),
                                                  dims_.voxelsPerStep());
}

std::span<double> Field4D::step(std::size_t t) {
  if (t >= dims_.t) fail(ErrorCode::kOutOfBounds, "time step out of range");
  return std::span<double>(values_).subspan(t * dims_.voxelsPerStep(),
                                            dims_.voxelsPerStep());
}

}  // namespace voxcast
