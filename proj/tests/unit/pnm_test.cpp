#include <gtest/gtest.h>

#include <string>

#include "s2rgap/pnm.hpp"
#include "s2rgap/reference_encoder.hpp"
#include "temp_dir.hpp"

namespace s2r {
namespace {

std::vector<std::byte> raw(const std::string& header, std::initializer_list<int> pixels) {
  std::vector<std::byte> out;
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  for (int p : pixels) out.push_back(static_cast<std::byte>(p));
  return out;
}

Errc decode_error(const std::vector<std::byte>& bytes) {
  try {
    decode_pnm(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return Errc::parameter;
}

TEST(Pnm, DecodesColourAndGray) {
  const auto red = decode_pnm(raw("P6\n1 1\n255\n", {255, 0, 0}));
  EXPECT_EQ(red(0, 0, 0), 1.0);
  EXPECT_EQ(red(1, 0, 0), 0.0);
  EXPECT_EQ(red(2, 0, 0), 0.0);

  const auto gray = decode_pnm(raw("P5\n1 1\n255\n", {128}));
  ASSERT_EQ(gray.channels(), 3u);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(gray(c, 0, 0), 128.0 / 255.0);
}

TEST(Pnm, HeaderCommentsAndLayout) {
  const auto img = decode_pnm(raw("P5 # comment\n3 # w\n2\n255\n", {0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(img.width(), 3u);
  EXPECT_EQ(img.height(), 2u);
  EXPECT_EQ(img(0, 1, 0), 3.0 / 255.0);
  // A pixel byte that looks like whitespace must not be swallowed by the header.
  const auto ws = decode_pnm(raw("P5\n1 1\n255\n", {'\n'}));
  EXPECT_EQ(ws(0, 0, 0), 10.0 / 255.0);
}

TEST(Pnm, Errors) {
  EXPECT_EQ(decode_error(raw("P6\n1 1\n65535\n", {0, 0, 0, 0, 0, 0})), Errc::unsupported_maxval);
  EXPECT_EQ(decode_error(raw("P3\n1 1\n255\n", {})), Errc::unsupported_format);
  EXPECT_EQ(decode_error(raw("BM", {})), Errc::unsupported_format);
  EXPECT_EQ(decode_error(raw("P6\n1\n", {})), Errc::malformed);
  EXPECT_EQ(decode_error(raw("P6\n0 1\n255\n", {})), Errc::malformed);
  EXPECT_EQ(decode_error(raw("P6\n2 1\n255\n", {1, 2, 3})), Errc::truncated);
}

TEST(Pnm, WriteReadRoundTrip) {
  test::TempDir dir;
  const auto img = gen_lane_scene(4, 32, 48);
  write_ppm(dir / "a.ppm", img);
  const auto back = read_image(dir / "a.ppm");
  ASSERT_EQ(back.height(), 32u);
  ASSERT_EQ(back.width(), 48u);
  for (std::size_t i = 0; i < img.data().size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 0.5 / 255.0 + 1e-12);
  // Re-encoding the decoded raster reproduces the file.
  EXPECT_EQ(encode_ppm(back), read_file_bytes(dir / "a.ppm"));
  EXPECT_EQ(read_image_size(dir / "a.ppm").height, 32u);
}

TEST(Pnm, ReadErrorsNameTheFile) {
  test::TempDir dir;
  write_file_bytes(dir / "bad.ppm", raw("P6\n1 1\n65535\n", {}));
  try {
    read_image(dir / "bad.ppm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unsupported_maxval);
    EXPECT_NE(std::string(e.what()).find("bad.ppm"), std::string::npos);
  }
}

}  // namespace
}  // namespace s2r
