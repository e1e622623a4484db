#include <doctest.h>
#include <png.h>

#include <cstdio>

#include "support/tmpdir.hpp"
#include "unshade/image.hpp"
#include "unshade/png_io.hpp"

using namespace unshade;

TEST_CASE("image: encode/decode round-trips every byte value") {
  for (int b = 0; b < 256; ++b) {
    double v = encode_value(static_cast<std::uint8_t>(b));
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
    CHECK(decode_value(v) == b);
  }
  CHECK(encode_value(0) == -1.0);
  CHECK(encode_value(255) == 1.0);
}

TEST_CASE("image: decode clamps and rounds half up") {
  CHECK(decode_value(-1.5) == 0);
  CHECK(decode_value(1.5) == 255);
  CHECK(decode_value(0.0) == 128);  // 127.5 rounds up
  CHECK(decode_value(-1.0) == 0);
  CHECK(decode_value(1.0) == 255);
}

TEST_CASE("image: crop extracts the right window") {
  RawImage raw(4, 5);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x)
      for (int c = 0; c < 3; ++c)
        raw.at(y, x, c) = static_cast<std::uint8_t>(10 * y + x);
  Image img = encode_image(raw);
  Image sub = crop(img, 1, 2, 2, 3);
  CHECK(sub.height == 2);
  CHECK(sub.width == 3);
  CHECK(sub.at(0, 0, 0) == img.at(0, 1, 2));
  CHECK(sub.at(2, 1, 2) == img.at(2, 2, 4));
  CHECK_THROWS_AS(crop(img, 3, 0, 2, 2), Error);
}

TEST_CASE("image: hflip is an involution and mirrors columns") {
  RawImage raw(2, 3);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x)
      for (int c = 0; c < 3; ++c)
        raw.at(y, x, c) = static_cast<std::uint8_t>(y * 3 + x + c);
  Image img = encode_image(raw);
  Image f = hflip(img);
  CHECK(f.at(0, 0, 0) == img.at(0, 0, 2));
  CHECK(f.at(1, 1, 1) == img.at(1, 1, 1));
  Image ff = hflip(f);
  CHECK(ff.data == img.data);
}

TEST_CASE("image: center crop to multiple of 4") {
  Image img(65, 66);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<double>(i % 97) / 97.0;
  Image c = center_crop_multiple(img, 4);
  CHECK(c.height == 64);
  CHECK(c.width == 64);
  // offsets: (65-64)/2 = 0, (66-64)/2 = 1
  CHECK(c.at(0, 0, 0) == img.at(0, 0, 1));
  Image same = center_crop_multiple(c, 4);
  CHECK(same.data == c.data);
  CHECK_THROWS_AS(center_crop_multiple(Image(3, 8), 4), Error);
}

TEST_CASE("image: png round trip preserves bytes") {
  TmpDir tmp("png");
  RawImage raw(7, 5);
  unsigned v = 17;
  for (auto& b : raw.rgb) {
    v = v * 1103515245u + 12345u;
    b = static_cast<std::uint8_t>(v >> 16);
  }
  write_png_rgb8(tmp.file("a.png"), raw);
  RawImage back = read_png_rgb8(tmp.file("a.png"));
  CHECK(back.height == 7);
  CHECK(back.width == 5);
  CHECK(back.rgb == raw.rgb);
}

TEST_CASE("image: grayscale png reads back as rgb") {
  TmpDir tmp("gray");
  std::vector<std::uint8_t> gray = {0, 64, 128, 255, 10, 20};
  write_png_gray8(tmp.file("g.png"), 2, 3, gray);
  RawImage back = read_png_rgb8(tmp.file("g.png"));
  CHECK(back.height == 2);
  CHECK(back.width == 3);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x)
      for (int c = 0; c < 3; ++c)
        CHECK(back.at(y, x, c) == gray[static_cast<std::size_t>(y * 3 + x)]);
}

namespace {

// Authors a 2x2 8-bit RGBA PNG directly through libpng.
void write_rgba_png(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, 2, 2, 8, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::uint8_t row0[8] = {1, 2, 3, 4, 5, 6, 7, 8};
  std::uint8_t row1[8] = {9, 10, 11, 12, 13, 14, 15, 16};
  png_write_row(png, row0);
  png_write_row(png, row1);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST_CASE("image: alpha png is rejected") {
  TmpDir tmp("alpha");
  write_rgba_png(tmp.file("rgba.png"));
  CHECK_THROWS_WITH_AS(read_png_rgb8(tmp.file("rgba.png")),
                       doctest::Contains("alpha"), Error);
}

TEST_CASE("image: missing file is an error") {
  CHECK_THROWS_AS(read_png_rgb8("/nonexistent/nope.png"), Error);
}

TEST_CASE("image: hstack composes a gutter-separated strip") {
  RawImage a(2, 2), b(2, 3);
  for (auto& v : a.rgb) v = 10;
  for (auto& v : b.rgb) v = 20;
  RawImage s = hstack({a, b});
  CHECK(s.height == 2);
  CHECK(s.width == 2 + 2 + 3);
  CHECK(s.at(0, 0, 0) == 10);
  CHECK(s.at(0, 2, 0) == 255);  // gutter
  CHECK(s.at(0, 3, 0) == 255);
  CHECK(s.at(1, 4, 2) == 20);
}

TEST_CASE("image: mask round trip through 0/255 rendering") {
  ShadowMask m(2, 3);
  m.at(0, 1) = 1;
  m.at(1, 2) = 1;
  CHECK(m.count_ones() == 2);
  RawImage raw = mask_to_raw(m);
  CHECK(raw.at(0, 1, 0) == 255);
  CHECK(raw.at(0, 0, 0) == 0);
  ShadowMask back = mask_from_raw(raw);
  CHECK(back == m);
  GrayImage g = mask_to_gray(m);
  CHECK(g.at(0, 1) == 255);
  CHECK(g.at(0, 0) == 0);
}

TEST_CASE("image: tensor conversions and mask channel") {
  RawImage raw(4, 4);
  for (std::size_t i = 0; i < raw.rgb.size(); ++i)
    raw.rgb[i] = static_cast<std::uint8_t>(i * 5);
  Image img = encode_image(raw);
  auto t = image_to_tensor<float>(img);
  CHECK(t.shape() == std::vector<std::int64_t>({3, 4, 4}));
  CHECK(t.at(1, 2, 3) == doctest::Approx(img.at(1, 2, 3)));
  Image back = tensor_to_image(t);
  CHECK(back.at(2, 1, 0) == doctest::Approx(img.at(2, 1, 0)));

  ShadowMask m(4, 4);
  m.at(0, 0) = 1;
  auto t4 = with_mask_channel(t, m);
  CHECK(t4.shape() == std::vector<std::int64_t>({4, 4, 4}));
  CHECK(t4.at(3, 0, 0) == 1.0f);
  CHECK(t4.at(3, 0, 1) == -1.0f);
  CHECK(t4.at(1, 2, 3) == t.at(1, 2, 3));

  auto plane = mask_plane<double>(m);
  CHECK(plane.at(0, 0, 0) == 1.0);
  CHECK(plane.at(0, 3, 3) == -1.0);
}
