#pragma once

// Dense activation containers and the three primitives that make up the
// attention generator: channel sum of squares, bilinear upsampling and
// temperature spatial softmax.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "s2rgap/error.hpp"

namespace s2r {

namespace detail {

inline void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(Errc::parameter, std::string(what) + " contains a non-finite value");
  }
}

}  // namespace detail

/// C x H x W activation tensor, channel-major, row-major within a channel.
class Tensor3 {
 public:
  Tensor3(std::size_t channels, std::size_t height, std::size_t width, std::vector<double> data)
      : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    if (channels_ == 0 || height_ == 0 || width_ == 0) {
      fail(Errc::shape, "Tensor3 extents must be >= 1");
    }
    if (data_.size() != channels_ * height_ * width_) {
      fail(Errc::shape, "Tensor3 data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(channels_) + "x" +
                            std::to_string(height_) + "x" + std::to_string(width_));
    }
    detail::require_finite(data_, "Tensor3");
  }

  static Tensor3 zeros(std::size_t channels, std::size_t height, std::size_t width) {
    return Tensor3(channels, height, width, std::vector<double>(channels * height * width, 0.0));
  }

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }

  double operator()(std::size_t c, std::size_t y, std::size_t x) const noexcept {
    return data_[(c * height_ + y) * width_ + x];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> plane(std::size_t c) const noexcept {
    return std::span<const double>(data_).subspan(c * plane_size(), plane_size());
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t channels_;
  std::size_t height_;
  std::size_t width_;
  std::vector<double> data_;
};

/// Single-channel H x W map, row-major.
class Map2 {
 public:
  Map2(std::size_t height, std::size_t width, std::vector<double> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (height_ == 0 || width_ == 0) fail(Errc::shape, "Map2 extents must be >= 1");
    if (data_.size() != height_ * width_) {
      fail(Errc::shape, "Map2 data length " + std::to_string(data_.size()) + " does not match " +
                            std::to_string(height_) + "x" + std::to_string(width_));
    }
    detail::require_finite(data_, "Map2");
  }

  static Map2 filled(std::size_t height, std::size_t width, double value) {
    return Map2(height, width, std::vector<double>(height * width, value));
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t y, std::size_t x) const noexcept { return data_[y * width_ + x]; }
  std::span<const double> data() const noexcept { return data_; }

  double min() const noexcept { return *std::min_element(data_.begin(), data_.end()); }
  double max() const noexcept { return *std::max_element(data_.begin(), data_.end()); }

  friend bool operator==(const Map2&, const Map2&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> data_;
};

/// Spatial softmax output: a nonnegative map summing to one.
///
/// Values are strictly positive unless the logit spread divided by the
/// temperature exceeds the double exponent range (about 745), where exp()
/// underflows to exactly zero.
class AttentionMap {
 public:
  AttentionMap(Map2 map, double temperature) : map_(std::move(map)), temperature_(temperature) {
    if (!(temperature_ > 0.0) || !std::isfinite(temperature_)) {
      fail(Errc::parameter, "temperature must be a positive finite number");
    }
    double sum = 0.0;
    for (double v : map_.data()) {
      if (v < 0.0) fail(Errc::parameter, "attention values must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9 * static_cast<double>(map_.size())) {
      fail(Errc::parameter, "attention values must sum to 1");
    }
  }

  const Map2& map() const noexcept { return map_; }
  double temperature() const noexcept { return temperature_; }
  std::size_t height() const noexcept { return map_.height(); }
  std::size_t width() const noexcept { return map_.width(); }
  std::span<const double> data() const noexcept { return map_.data(); }

  friend bool operator==(const AttentionMap&, const AttentionMap&) = default;

 private:
  Map2 map_;
  double temperature_;
};

/// out[y, x] = sum_c t[c, y, x]^2
inline Map2 channel_sum_squares(const Tensor3& t) {
  std::vector<double> out(t.plane_size(), 0.0);
  for (std::size_t c = 0; c < t.channels(); ++c) {
    auto plane = t.plane(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += plane[i] * plane[i];
  }
  return Map2(t.height(), t.width(), std::move(out));
}

namespace detail {

struct AxisSample {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

// Half-pixel-centre source coordinates, clamped to the valid range.
inline std::vector<AxisSample> axis_samples(std::size_t src, std::size_t dst) {
  std::vector<AxisSample> samples(dst);
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  const double last = static_cast<double>(src - 1);
  for (std::size_t d = 0; d < dst; ++d) {
    double s = (static_cast<double>(d) + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, last);
    const auto lo = static_cast<std::size_t>(std::floor(s));
    samples[d] = {lo, std::min(lo + 1, src - 1), s - static_cast<double>(lo)};
  }
  return samples;
}

}  // namespace detail

/// Bilinear resize with half-pixel centres and edge clamping. std::lerp keeps
/// every output inside the range of its four source samples.
inline Map2 bilinear_upsample(const Map2& m, std::size_t out_h, std::size_t out_w) {
  if (out_h == 0 || out_w == 0) fail(Errc::parameter, "upsample target must be at least 1x1");
  const auto rows = detail::axis_samples(m.height(), out_h);
  const auto cols = detail::axis_samples(m.width(), out_w);

  std::vector<double> out(out_h * out_w);
  for (std::size_t y = 0; y < out_h; ++y) {
    const auto& r = rows[y];
    for (std::size_t x = 0; x < out_w; ++x) {
      const auto& c = cols[x];
      const double top = std::lerp(m(r.lo, c.lo), m(r.lo, c.hi), c.frac);
      const double bottom = std::lerp(m(r.hi, c.lo), m(r.hi, c.hi), c.frac);
      out[y * out_w + x] = std::lerp(top, bottom, r.frac);
    }
  }
  return Map2(out_h, out_w, std::move(out));
}

/// Softmax over all pixels of m with logits divided by temperature.
/// The maximum logit is subtracted first; the result is unchanged.
inline AttentionMap spatial_softmax(const Map2& m, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(Errc::parameter, "temperature must be a positive finite number");
  }
  const double peak = m.max();
  std::vector<double> out(m.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp((m.data()[i] - peak) / temperature);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return AttentionMap(Map2(m.height(), m.width(), std::move(out)), temperature);
}

/// Attention generator: sum of squares over channels, resize to the target,
/// then spatial softmax.
inline AttentionMap attention_map(const Tensor3& t, std::size_t target_h, std::size_t target_w,
                                  double temperature) {
  return spatial_softmax(bilinear_upsample(channel_sum_squares(t), target_h, target_w), temperature);
}

}  // namespace s2r
