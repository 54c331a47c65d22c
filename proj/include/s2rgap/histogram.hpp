#pragma once

// 8-bit quantization of attention maps, 256-bin intensity histograms,
// per-set averaging and the histogram correlation score.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "s2rgap/error.hpp"
#include "s2rgap/tensor.hpp"

namespace s2r {

inline constexpr std::size_t kBinCount = 256;
inline constexpr unsigned kMaxIntensity = 255;
inline constexpr unsigned kDefaultExcludeBelow = 100;

class QuantizedMap {
 public:
  QuantizedMap(std::size_t height, std::size_t width, std::vector<std::uint8_t> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (height_ == 0 || width_ == 0) fail(Errc::shape, "QuantizedMap extents must be >= 1");
    if (data_.size() != height_ * width_) fail(Errc::shape, "QuantizedMap data length mismatch");
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  friend bool operator==(const QuantizedMap&, const QuantizedMap&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> data_;
};

/// Per-map min-max normalization followed by round-half-up to 0..255.
/// A constant map quantizes to all zeros.
inline QuantizedMap quantize(const Map2& m) {
  const double lo = m.min();
  const double hi = m.max();
  std::vector<std::uint8_t> out(m.size(), 0);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double unit = (m.data()[i] - lo) / range;
      const double q = std::floor(unit * kMaxIntensity + 0.5);
      out[i] = static_cast<std::uint8_t>(std::clamp(q, 0.0, double{kMaxIntensity}));
    }
  }
  return QuantizedMap(m.height(), m.width(), std::move(out));
}

inline QuantizedMap quantize(const AttentionMap& a) { return quantize(a.map()); }

/// 256 real-valued bins. Bins 0..=excluded_below are carried along but never
/// take part in a comparison.
class IntensityHistogram {
 public:
  using Bins = std::array<double, kBinCount>;

  explicit IntensityHistogram(unsigned excluded_below = kDefaultExcludeBelow)
      : IntensityHistogram(Bins{}, excluded_below, 0) {}

  IntensityHistogram(const Bins& bins, unsigned excluded_below, std::uint64_t image_count)
      : bins_(bins), excluded_below_(excluded_below), image_count_(image_count) {
    if (excluded_below_ > kMaxIntensity) {
      fail(Errc::parameter, "excluded_below must be in 0..255, got " + std::to_string(excluded_below_));
    }
    for (double v : bins_) {
      if (!std::isfinite(v) || v < 0.0) fail(Errc::parameter, "histogram bins must be finite and >= 0");
    }
  }

  const Bins& bins() const noexcept { return bins_; }
  double operator[](std::size_t i) const noexcept { return bins_[i]; }
  unsigned excluded_below() const noexcept { return excluded_below_; }
  std::uint64_t image_count() const noexcept { return image_count_; }

  /// Bins with index > excluded_below.
  std::span<const double> participating() const noexcept {
    return std::span<const double>(bins_).subspan(excluded_below_ + 1);
  }

  double total() const noexcept {
    double sum = 0.0;
    for (double v : bins_) sum += v;
    return sum;
  }

  friend bool operator==(const IntensityHistogram&, const IntensityHistogram&) = default;

 private:
  Bins bins_;
  unsigned excluded_below_;
  std::uint64_t image_count_;
};

inline IntensityHistogram histogram(const QuantizedMap& q, unsigned excluded_below = kDefaultExcludeBelow) {
  IntensityHistogram::Bins bins{};
  for (std::uint8_t v : q.data()) bins[v] += 1.0;
  return IntensityHistogram(bins, excluded_below, 1);
}

/// Bin-wise sum. Counts are integers held in doubles, so the merge is exact
/// and independent of accumulation order.
inline IntensityHistogram accumulate(const IntensityHistogram& acc, const IntensityHistogram& h) {
  if (acc.excluded_below() != h.excluded_below()) {
    fail(Errc::config, "cannot accumulate histograms with different exclusion ranges (" +
                           std::to_string(acc.excluded_below()) + " vs " +
                           std::to_string(h.excluded_below()) + ")");
  }
  IntensityHistogram::Bins bins = acc.bins();
  for (std::size_t i = 0; i < kBinCount; ++i) bins[i] += h[i];
  return IntensityHistogram(bins, acc.excluded_below(), acc.image_count() + h.image_count());
}

inline IntensityHistogram mean_histogram(const IntensityHistogram& acc) {
  if (acc.image_count() == 0) fail(Errc::empty_set, "cannot average a histogram over zero images");
  IntensityHistogram::Bins bins = acc.bins();
  const auto n = static_cast<double>(acc.image_count());
  for (double& v : bins) v /= n;
  return IntensityHistogram(bins, acc.excluded_below(), acc.image_count());
}

/// Pearson correlation of the participating bins (index > excluded_below),
/// means taken over those bins only. Result is clamped to [-1, 1].
inline double correlation(const IntensityHistogram& h1, const IntensityHistogram& h2) {
  if (h1.excluded_below() != h2.excluded_below()) {
    fail(Errc::config, "cannot correlate histograms with different exclusion ranges");
  }
  const auto a = h1.participating();
  const auto b = h2.participating();
  if (a.size() < 2) {
    fail(Errc::parameter, "correlation needs at least 2 participating bins, excluded_below=" +
                              std::to_string(h1.excluded_below()));
  }
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;

  double cross = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    fail(Errc::degenerate, "histogram is constant over the participating bins");
  }
  return std::clamp(cross / std::sqrt(var_a * var_b), -1.0, 1.0);
}

}  // namespace s2r
