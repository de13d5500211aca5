#include "voxcast/png_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "voxcast/error.hpp"

namespace voxcast {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp. The message is copied here before
// the jump so that no C++ object with a destructor lives in the jumped frame.
struct PngErrorSink {
  char message[256] = {};
};

void onPngError(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

void onPngWarning(png_structp, png_const_charp) {}

enum class ReadStatus { kOk, kCorrupt, kUnsupported };

struct ReadInfo {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bitDepth = 0;
  int colorType = 0;
  int interlace = 0;
};

// Header is inspected first; pixels are only decoded for 8-bit RGB.
ReadStatus readCore(std::FILE* fp, PngErrorSink& sink, ReadInfo& info,
                    std::vector<png_bytep>& rows, std::vector<std::uint8_t>& pixels) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, onPngError, onPngWarning);
  if (png == nullptr) return ReadStatus::kCorrupt;
  png_infop pinfo = png_create_info_struct(png);
  if (pinfo == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return ReadStatus::kCorrupt;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &pinfo, nullptr);
    return ReadStatus::kCorrupt;
  }
  png_init_io(png, fp);
  png_read_info(png, pinfo);
  png_get_IHDR(png, pinfo, &info.width, &info.height, &info.bitDepth, &info.colorType,
               &info.interlace, nullptr, nullptr);
  if (info.bitDepth != 8 || info.colorType != PNG_COLOR_TYPE_RGB) {
    png_destroy_read_struct(&png, &pinfo, nullptr);
    return ReadStatus::kUnsupported;
  }
  if (info.interlace != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, pinfo);
  const std::size_t stride = static_cast<std::size_t>(info.width) * 3;
  pixels.resize(stride * info.height);
  rows.resize(info.height);
  for (png_uint_32 r = 0; r < info.height; ++r) rows[r] = pixels.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &pinfo, nullptr);
  return ReadStatus::kOk;
}

bool writeCore(std::FILE* fp, PngErrorSink& sink, const RgbFrame& frame,
               std::vector<png_bytep>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, onPngError, onPngWarning);
  if (png == nullptr) return false;
  png_infop pinfo = png_create_info_struct(png);
  if (pinfo == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &pinfo);
    return false;
  }
  png_init_io(png, fp);
  png_set_compression_level(png, kPngCompressionLevel);
  png_set_IHDR(png, pinfo, static_cast<png_uint_32>(frame.width),
               static_cast<png_uint_32>(frame.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, pinfo);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &pinfo);
  return true;
}

}  // namespace

void writeFramePixels(const RgbFrame& frame, const std::filesystem::path& file) {
  if (frame.width == 0 || frame.height == 0 ||
      frame.pixels.size() != frame.width * frame.height * kChannels) {
    fail(ErrorCode::kContractViolation, "frame buffer does not match its dimensions");
  }
  FilePtr fp(std::fopen(file.c_str(), "wb"));
  if (!fp) fail(ErrorCode::kIo, "cannot create " + file.string() + ": " + std::strerror(errno));

  const std::size_t stride = frame.width * kChannels;
  std::vector<png_bytep> rows(frame.height);
  for (std::size_t r = 0; r < frame.height; ++r) {
    rows[r] = const_cast<png_bytep>(frame.pixels.data() + r * stride);
  }
  PngErrorSink sink;
  if (!writeCore(fp.get(), sink, frame, rows)) {
    fail(ErrorCode::kIo, "PNG encode of " + file.string() + " failed: " + sink.message);
  }
  if (std::fflush(fp.get()) != 0 || std::ferror(fp.get())) {
    fail(ErrorCode::kIo, "failed writing " + file.string());
  }
}

RgbFrame readFramePixels(const std::filesystem::path& file) {
  FilePtr fp(std::fopen(file.c_str(), "rb"));
  if (!fp) fail(ErrorCode::kMissingMedia, "cannot open frame " + file.string());

  unsigned char signature[8] = {};
  if (std::fread(signature, 1, sizeof(signature), fp.get()) != sizeof(signature) ||
      png_sig_cmp(signature, 0, sizeof(signature)) != 0) {
    fail(ErrorCode::kCorruptMedia, file.string() + " is not a PNG image");
  }
  std::rewind(fp.get());

  PngErrorSink sink;
  ReadInfo info;
  std::vector<png_bytep> rows;
  RgbFrame frame;
  switch (readCore(fp.get(), sink, info, rows, frame.pixels)) {
    case ReadStatus::kOk:
      break;
    case ReadStatus::kUnsupported:
      fail(ErrorCode::kUnsupportedFormat,
           file.string() + ": expected 8-bit RGB, got bit depth " +
               std::to_string(info.bitDepth) + " colour type " + std::to_string(info.colorType));
    case ReadStatus::kCorrupt:
      fail(ErrorCode::kCorruptMedia, file.string() + ": " + sink.message);
  }
  frame.width = info.width;
  frame.height = info.height;
  return frame;
}

}  // namespace voxcast
