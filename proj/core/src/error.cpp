#include "voxcast/error.hpp"

namespace voxcast {

std::string_view errorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kContractViolation: return "contract-violation";
    case ErrorCode::kOutOfBounds: return "out-of-bounds";
    case ErrorCode::kOversize: return "oversize";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCorruptInput: return "corrupt-input";
    case ErrorCode::kUnsupportedFormat: return "unsupported-format";
    case ErrorCode::kInvalidManifest: return "invalid-manifest";
    case ErrorCode::kMissingMedia: return "missing-media";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kCorruptMedia: return "corrupt-media";
    case ErrorCode::kSpecValidation: return "spec-validation";
    case ErrorCode::kEncoderFailure: return "encoder-failure";
    case ErrorCode::kEncoderAborted: return "encoder-aborted";
    case ErrorCode::kTruncatedStream: return "truncated-stream";
    case ErrorCode::kToolUnavailable: return "tool-unavailable";
  }
  return "unknown";
}

}  // namespace voxcast
