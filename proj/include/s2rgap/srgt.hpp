#pragma once

// SRGT tensor container.
//
//   offset  size       field
//   0       4          magic "SRGT"
//   4       1          version (1)
//   5       1          dtype (0 = float32 little-endian, 1 = uint8)
//   6       1          ndim (1..4)
//   7       4 * ndim   shape, uint32 little-endian, outermost first
//   ...     payload    element_size * product(shape) bytes, row-major
//
// The file ends exactly at the end of the payload.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "s2rgap/error.hpp"
#include "s2rgap/tensor.hpp"

namespace s2r {

enum class SrgtDtype : std::uint8_t { float32 = 0, uint8 = 1 };

inline constexpr std::uint8_t kSrgtVersion = 1;
inline constexpr std::uint64_t kSrgtMaxElements = std::uint64_t{1} << 31;

inline constexpr std::size_t element_size(SrgtDtype dtype) noexcept {
  return dtype == SrgtDtype::float32 ? 4 : 1;
}

struct SrgtTensor {
  SrgtDtype dtype = SrgtDtype::float32;
  std::vector<std::uint32_t> shape;
  std::vector<std::byte> payload;

  std::uint64_t element_count() const noexcept {
    std::uint64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }

  friend bool operator==(const SrgtTensor&, const SrgtTensor&) = default;
};

namespace detail {

inline std::uint64_t checked_element_count(std::span<const std::uint32_t> shape) {
  std::uint64_t n = 1;
  for (auto d : shape) {
    if (d == 0) fail(Errc::malformed, "SRGT shape has a zero extent");
    n *= d;
    if (n > kSrgtMaxElements) fail(Errc::shape_overflow, "SRGT element count exceeds 2^31");
  }
  return n;
}

inline void validate_layout(const SrgtTensor& t) {
  if (t.dtype != SrgtDtype::float32 && t.dtype != SrgtDtype::uint8) {
    fail(Errc::unsupported_dtype, "unsupported SRGT dtype " + std::to_string(static_cast<int>(t.dtype)));
  }
  if (t.shape.empty() || t.shape.size() > 4) fail(Errc::malformed, "SRGT ndim must be in 1..4");
  const auto n = checked_element_count(t.shape);
  if (t.payload.size() != n * element_size(t.dtype)) {
    fail(Errc::malformed, "SRGT payload length does not match shape");
  }
}

inline void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
}

inline std::uint32_t get_u32(std::span<const std::byte> in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline std::vector<std::byte> encode_srgt(const SrgtTensor& t) {
  detail::validate_layout(t);
  std::vector<std::byte> out;
  out.reserve(7 + 4 * t.shape.size() + t.payload.size());
  for (char c : {'S', 'R', 'G', 'T'}) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(kSrgtVersion));
  out.push_back(static_cast<std::byte>(t.dtype));
  out.push_back(static_cast<std::byte>(t.shape.size()));
  for (auto d : t.shape) detail::put_u32(out, d);
  out.insert(out.end(), t.payload.begin(), t.payload.end());
  return out;
}

inline SrgtTensor decode_srgt(std::span<const std::byte> bytes) {
  if (bytes.size() < 7) fail(Errc::truncated, "SRGT header truncated");
  if (std::memcmp(bytes.data(), "SRGT", 4) != 0) fail(Errc::bad_magic, "not an SRGT file (bad magic)");
  const auto version = static_cast<std::uint8_t>(bytes[4]);
  if (version != kSrgtVersion) {
    fail(Errc::unsupported_version, "unsupported SRGT version " + std::to_string(version));
  }
  const auto dtype = static_cast<std::uint8_t>(bytes[5]);
  if (dtype > 1) fail(Errc::unsupported_dtype, "unsupported SRGT dtype " + std::to_string(dtype));
  const auto ndim = static_cast<std::uint8_t>(bytes[6]);
  if (ndim < 1 || ndim > 4) fail(Errc::malformed, "SRGT ndim must be in 1..4, got " + std::to_string(ndim));

  const std::size_t header = 7 + 4 * std::size_t{ndim};
  if (bytes.size() < header) fail(Errc::truncated, "SRGT shape truncated");

  SrgtTensor t;
  t.dtype = static_cast<SrgtDtype>(dtype);
  for (std::size_t i = 0; i < ndim; ++i) t.shape.push_back(detail::get_u32(bytes.subspan(7 + 4 * i, 4)));
  const auto payload_size = detail::checked_element_count(t.shape) * element_size(t.dtype);
  const auto available = bytes.size() - header;
  if (available < payload_size) {
    fail(Errc::truncated, "SRGT payload truncated: need " + std::to_string(payload_size) + " bytes, have " +
                              std::to_string(available));
  }
  if (available > payload_size) {
    fail(Errc::trailing_data, std::to_string(available - payload_size) + " trailing bytes after SRGT payload");
  }
  const auto payload = bytes.subspan(header);
  t.payload.assign(payload.begin(), payload.end());
  return t;
}

inline std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::io, "error reading '" + path.string() + "'");
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::io, "error writing '" + path.string() + "'");
}

inline SrgtTensor read_srgt(const std::filesystem::path& path) { return decode_srgt(read_file_bytes(path)); }

inline void write_srgt(const std::filesystem::path& path, const SrgtTensor& t) {
  write_file_bytes(path, encode_srgt(t));
}

/// Packs float32 values into a little-endian SRGT tensor.
inline SrgtTensor make_srgt(std::vector<std::uint32_t> shape, std::span<const float> values) {
  SrgtTensor t{SrgtDtype::float32, std::move(shape), {}};
  if (detail::checked_element_count(t.shape) != values.size()) {
    fail(Errc::shape, "value count does not match SRGT shape");
  }
  t.payload.reserve(values.size() * 4);
  for (float v : values) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) t.payload.push_back(static_cast<std::byte>((bits >> (8 * i)) & 0xffu));
  }
  return t;
}

inline SrgtTensor make_srgt(std::vector<std::uint32_t> shape, std::span<const std::uint8_t> values) {
  SrgtTensor t{SrgtDtype::uint8, std::move(shape), {}};
  if (detail::checked_element_count(t.shape) != values.size()) {
    fail(Errc::shape, "value count does not match SRGT shape");
  }
  t.payload.resize(values.size());
  std::memcpy(t.payload.data(), values.data(), values.size());
  return t;
}

/// Element values widened to double (uint8 values are not rescaled).
inline std::vector<double> srgt_values(const SrgtTensor& t) {
  detail::validate_layout(t);
  const auto n = static_cast<std::size_t>(t.element_count());
  std::vector<double> out(n);
  if (t.dtype == SrgtDtype::uint8) {
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(std::to_integer<std::uint8_t>(t.payload[i]));
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(t.payload[4 * i + b]) << (8 * b);
    out[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return out;
}

/// Interprets a tensor as C x H x W. A 2-D tensor is one channel; a 4-D
/// tensor must have a leading batch extent of 1.
inline Tensor3 to_tensor3(const SrgtTensor& t) {
  std::vector<std::uint32_t> dims = t.shape;
  if (dims.size() == 4) {
    if (dims[0] != 1) fail(Errc::shape, "4-D activation tensors must have batch size 1");
    dims.erase(dims.begin());
  }
  if (dims.size() == 2) dims.insert(dims.begin(), 1);
  if (dims.size() != 3) fail(Errc::shape, "activation tensor must be 2-D, 3-D or 1xCxHxW");
  return Tensor3(dims[0], dims[1], dims[2], srgt_values(t));
}

inline SrgtTensor from_tensor3(const Tensor3& t) {
  std::vector<float> values(t.data().begin(), t.data().end());
  return make_srgt({static_cast<std::uint32_t>(t.channels()), static_cast<std::uint32_t>(t.height()),
                    static_cast<std::uint32_t>(t.width())},
                   values);
}

}  // namespace s2r
