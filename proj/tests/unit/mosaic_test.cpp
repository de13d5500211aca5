#include <doctest.h>

#include <set>
#include <tuple>

#include "mosaic_oracle.hpp"
#include "voxcast/error.hpp"
#include "voxcast/mosaic.hpp"
#include "voxcast/synth.hpp"

using namespace voxcast;

TEST_CASE("computeLayout examples") {
  SUBCASE("24x64x64") {
    const auto L = computeLayout(24, 64, 64);
    CHECK(L.slicesPerChannel == 8);
    CHECK(L.gridCols == 3);
    CHECK(L.gridRows == 3);
    CHECK(L.frameWidth == 192);
    CHECK(L.frameHeight == 192);
    CHECK(L.fillCode == 0);
  }
  SUBCASE("odd slice padded to even") {
    const auto L = computeLayout(1, 5, 7);
    CHECK(L.slicesPerChannel == 1);
    CHECK(L.gridCols == 1);
    CHECK(L.gridRows == 1);
    CHECK(L.frameWidth == 8);
    CHECK(L.frameHeight == 6);
  }
  SUBCASE("single voxel per channel") {
    const auto L = computeLayout(3, 1, 1);
    CHECK(L.slicesPerChannel == 1);
    CHECK(L.gridCols == 1);
    CHECK(L.gridRows == 1);
    CHECK(L.frameWidth == 2);
    CHECK(L.frameHeight == 2);
  }
}

TEST_CASE("computeLayout is deterministic and matches the oracle formulas") {
  for (std::size_t z = 1; z <= 200; ++z) {
    for (std::size_t y : {1, 3, 8, 17}) {
      const auto L = computeLayout(z, y, 5);
      const auto O = testing::oracleLayout(z, y, 5);
      REQUIRE(L == computeLayout(z, y, 5));
      REQUIRE(L.slicesPerChannel == O.slicesPerChannel);
      REQUIRE(L.gridCols == O.cols);
      REQUIRE(L.gridRows == O.rows);
      REQUIRE(L.frameWidth == O.width);
      REQUIRE(L.frameHeight == O.height);
      REQUIRE(L.gridCols * L.gridRows >= L.slicesPerChannel);
    }
  }
}

TEST_CASE("computeLayout rejects zero and oversize inputs") {
  CHECK_THROWS_AS(computeLayout(0, 1, 1), Error);
  try {
    computeLayout(3, 1, std::size_t{1} << 40);
    FAIL("expected oversize");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOversize);
  }
  try {
    computeLayout(std::size_t{1} << 62, 1 << 20, 1 << 20);
    FAIL("expected oversize");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOversize);
  }
}

TEST_CASE("voxelToPixel examples") {
  const auto L = computeLayout(24, 64, 64);
  CHECK(voxelToPixel({0, 0, 0}, L) == PixelLocation{Channel::kRed, 0, 0});
  CHECK(voxelToPixel({8, 0, 0}, L) == PixelLocation{Channel::kGreen, 0, 0});
  CHECK(voxelToPixel({23, 2, 5}, L) == PixelLocation{Channel::kBlue, 69, 130});
  try {
    voxelToPixel({24, 0, 0}, L);
    FAIL("expected bounds violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfBounds);
  }
}

TEST_CASE("pixelToVoxel examples") {
  const auto L = computeLayout(24, 64, 64);
  CHECK(pixelToVoxel(Channel::kRed, 0, 0, L) == VoxelIndex{0, 0, 0});
  CHECK(pixelToVoxel(Channel::kBlue, 69, 130, L) == VoxelIndex{23, 2, 5});
  CHECK_FALSE(pixelToVoxel(Channel::kRed, 191, 191, L).has_value());
  CHECK_THROWS_AS(pixelToVoxel(Channel::kRed, 192, 0, L), Error);
  // z = 5 leaves the blue channel's second slot empty.
  const auto partial = computeLayout(5, 2, 2);
  CHECK(pixelToVoxel(Channel::kBlue, 1, 1, partial) == VoxelIndex{4, 1, 1});
  CHECK_FALSE(pixelToVoxel(Channel::kBlue, 2, 0, partial).has_value());
}

TEST_CASE("exhaustive bijection against the painted oracle") {
  for (std::size_t z = 1; z <= 10; ++z) {
    for (std::size_t y = 1; y <= 8; ++y) {
      for (std::size_t x = 1; x <= 8; ++x) {
        const auto L = computeLayout(z, y, x);
        const auto owner = testing::paintOwnership(z, y, x);
        std::set<std::tuple<int, std::size_t, std::size_t>> seen;
        for (std::size_t zi = 0; zi < z; ++zi)
          for (std::size_t yi = 0; yi < y; ++yi)
            for (std::size_t xi = 0; xi < x; ++xi) {
              const auto p = voxelToPixel({zi, yi, xi}, L);
              REQUIRE(p.px < L.frameWidth);
              REQUIRE(p.py < L.frameHeight);
              REQUIRE(seen.emplace(static_cast<int>(p.channel), p.px, p.py).second);
              REQUIRE(pixelToVoxel(p.channel, p.px, p.py, L) == VoxelIndex{zi, yi, xi});
            }
        REQUIRE(seen.size() == z * y * x);
        std::size_t mapped = 0;
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t py = 0; py < L.frameHeight; ++py)
            for (std::size_t px = 0; px < L.frameWidth; ++px) {
              const auto got = pixelToVoxel(static_cast<Channel>(c), px, py, L);
              const auto& want = owner[(c * L.frameHeight + py) * L.frameWidth + px];
              REQUIRE(got.has_value() == want.has_value());
              if (got) {
                ++mapped;
                REQUIRE(got->z == want->z);
                REQUIRE(got->y == want->y);
                REQUIRE(got->x == want->x);
              }
            }
        REQUIRE(mapped == z * y * x);
      }
    }
  }
}

TEST_CASE("packFrame hand-packed example") {
  const auto L = computeLayout(3, 1, 1);
  const QuantizedFrame codes{3, 1, 1, {10, 20, 30}};
  const RgbFrame frame = packFrame(codes, L);
  REQUIRE(frame.width == 2);
  REQUIRE(frame.height == 2);
  CHECK(frame.pixels == std::vector<std::uint8_t>{10, 20, 30, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(unpackFrame(frame, L) == codes);
}

TEST_CASE("zero codes pack to a zero frame and back") {
  const auto L = computeLayout(7, 3, 5);
  const QuantizedFrame zeros{7, 3, 5, std::vector<std::uint8_t>(7 * 3 * 5, 0)};
  const RgbFrame frame = packFrame(zeros, L);
  CHECK(frame == RgbFrame(L.frameWidth, L.frameHeight, 0));
  CHECK(unpackFrame(RgbFrame(L.frameWidth, L.frameHeight, 0), L) == zeros);
}

TEST_CASE("padding takes the fill code") {
  const auto L = computeLayout(4, 3, 3, 77);
  const QuantizedFrame codes{4, 3, 3, std::vector<std::uint8_t>(36, 1)};
  const RgbFrame frame = packFrame(codes, L);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t py = 0; py < L.frameHeight; ++py)
      for (std::size_t px = 0; px < L.frameWidth; ++px) {
        const auto ch = static_cast<Channel>(c);
        CHECK(frame.at(px, py, ch) == (pixelToVoxel(ch, px, py, L) ? 1 : 77));
      }
}

TEST_CASE("pack/unpack round trip on random volumes") {
  SplitMix64 rng(99);
  SUBCASE("24x64x64") {
    const auto L = computeLayout(24, 64, 64);
    QuantizedFrame codes{24, 64, 64, std::vector<std::uint8_t>(24 * 64 * 64)};
    for (auto& c : codes.codes) c = static_cast<std::uint8_t>(rng.next());
    CHECK(unpackFrame(packFrame(codes, L), L) == codes);
  }
  SUBCASE("1000 small volumes") {
    for (int i = 0; i < 1000; ++i) {
      const std::size_t z = 1 + rng.next() % 12, y = 1 + rng.next() % 9, x = 1 + rng.next() % 9;
      const auto L = computeLayout(z, y, x);
      QuantizedFrame codes{z, y, x, std::vector<std::uint8_t>(z * y * x)};
      for (auto& c : codes.codes) c = static_cast<std::uint8_t>(rng.next());
      REQUIRE(unpackFrame(packFrame(codes, L), L) == codes);
    }
  }
}

TEST_CASE("pack/unpack reject mismatched dimensions") {
  const auto L = computeLayout(6, 4, 4);
  try {
    packFrame(QuantizedFrame{5, 4, 4, std::vector<std::uint8_t>(80)}, L);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  CHECK_THROWS_AS(unpackFrame(RgbFrame(L.frameWidth + 2, L.frameHeight), L), Error);
}
