#pragma once

// Binary PGM (P5) / PPM (P6) with maxval 255.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "s2rgap/error.hpp"
#include "s2rgap/profile.hpp"
#include "s2rgap/srgt.hpp"
#include "s2rgap/tensor.hpp"

namespace s2r {

struct PnmHeader {
  int channels = 0;  // 1 for P5, 3 for P6
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  std::size_t data_offset = 0;
};

namespace detail {

class PnmCursor {
 public:
  explicit PnmCursor(std::span<const std::byte> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = at(pos_);
      if (c == '#') {
        while (pos_ < bytes_.size() && at(pos_) != '\n' && at(pos_) != '\r') ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && at(pos_) >= '0' && at(pos_) <= '9') {
      value = value * 10 + static_cast<std::size_t>(at(pos_) - '0');
      if (value > 1'000'000'000) fail(Errc::malformed, std::string("PNM ") + what + " is too large");
      ++pos_;
    }
    if (pos_ == start) fail(Errc::malformed, std::string("PNM header is missing the ") + what);
    return value;
  }

  void single_whitespace() {
    if (pos_ >= bytes_.size() || !is_space(at(pos_))) {
      fail(Errc::malformed, "PNM header must end with one whitespace byte");
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  static bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }
  char at(std::size_t i) const noexcept { return static_cast<char>(bytes_[i]); }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PnmHeader parse_pnm_header(std::span<const std::byte> bytes) {
  if (bytes.size() < 2 || static_cast<char>(bytes[0]) != 'P') {
    fail(Errc::unsupported_format, "not a binary PGM/PPM file");
  }
  PnmHeader h;
  switch (static_cast<char>(bytes[1])) {
    case '5': h.channels = 1; break;
    case '6': h.channels = 3; break;
    default: fail(Errc::unsupported_format, std::string("unsupported PNM variant P") + static_cast<char>(bytes[1]));
  }
  detail::PnmCursor cur(bytes.subspan(2));
  h.width = cur.number("width");
  h.height = cur.number("height");
  h.maxval = static_cast<unsigned>(cur.number("maxval"));
  cur.single_whitespace();
  if (h.width == 0 || h.height == 0) fail(Errc::malformed, "PNM image has a zero extent");
  if (h.maxval != 255) fail(Errc::unsupported_maxval, "PNM maxval must be 255, got " + std::to_string(h.maxval));
  h.data_offset = 2 + cur.pos();
  return h;
}

/// Decodes to a 3 x H x W tensor in [0, 1]; gray images are replicated.
inline Tensor3 decode_pnm(std::span<const std::byte> bytes) {
  const auto h = parse_pnm_header(bytes);
  const std::size_t plane = h.width * h.height;
  const std::size_t need = plane * static_cast<std::size_t>(h.channels);
  if (bytes.size() - h.data_offset < need) {
    fail(Errc::truncated, "PNM pixel data truncated: need " + std::to_string(need) + " bytes, have " +
                              std::to_string(bytes.size() - h.data_offset));
  }
  const auto pixels = bytes.subspan(h.data_offset, need);
  std::vector<double> data(3 * plane);
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t src = h.channels == 1 ? i : 3 * i + c;
      data[c * plane + i] = static_cast<double>(std::to_integer<std::uint8_t>(pixels[src])) / 255.0;
    }
  }
  return Tensor3(3, h.height, h.width, std::move(data));
}

inline Tensor3 read_image(const std::filesystem::path& path) {
  try {
    return decode_pnm(read_file_bytes(path));
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

/// Image dimensions from the header only.
inline Size read_image_size(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    const auto h = parse_pnm_header(bytes);
    return {h.height, h.width};
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

/// P6 encoding of a 3-channel [0, 1] tensor, values rounded to 8 bits.
inline std::vector<std::byte> encode_ppm(const Tensor3& image) {
  if (image.channels() != 3) fail(Errc::shape, "PPM output needs a 3-channel image");
  const std::string header = "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::byte> out;
  out.reserve(header.size() + 3 * image.plane_size());
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = std::clamp(image(c, y, x), 0.0, 1.0);
        out.push_back(static_cast<std::byte>(static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5))));
      }
    }
  }
  return out;
}

inline void write_ppm(const std::filesystem::path& path, const Tensor3& image) {
  write_file_bytes(path, encode_ppm(image));
}

}  // namespace s2r
