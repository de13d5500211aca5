#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxcast {

/// Failure categories surfaced by the library. Each one is distinct so that
/// callers (and the CLI exit-code mapping) can react without parsing text.
enum class ErrorCode {
  kContractViolation,  // caller broke a documented precondition
  kOutOfBounds,
  kOversize,
  kIo,
  kCorruptInput,
  kUnsupportedFormat,
  kInvalidManifest,
  kMissingMedia,
  kDimensionMismatch,
  kCorruptMedia,
  kSpecValidation,
  kEncoderFailure,
  kEncoderAborted,
  kTruncatedStream,
  kToolUnavailable,
};

std::string_view errorCodeName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace voxcast
