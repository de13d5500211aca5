#pragma once

#include <string>

#include "voxcast/codec.hpp"

namespace voxcast::testing {

inline std::string stubPath() { return VOXCAST_STUB_CODEC; }

inline EncoderSpec stubEncoder(const std::string& extraFlags = "") {
  return {"stub", stubPath() + " encode --width {width} --height {height} --fps {fps} --output {output}" +
                      (extraFlags.empty() ? "" : " " + extraFlags),
          "rgb"};
}

inline DecoderSpec stubDecoder(const std::string& extraFlags = "") {
  return {"stub", stubPath() + " decode --input {input} --width {width} --height {height}" +
                      (extraFlags.empty() ? "" : " " + extraFlags)};
}

inline CodecPreset stubPreset() { return {stubEncoder(), stubDecoder()}; }

}  // namespace voxcast::testing
