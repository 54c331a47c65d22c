#pragma once

// Seeded, untrained convolutional encoder with three stages at 1/4, 1/8 and
// 1/16 resolution, plus synthetic road-scene and noise image generators.
// Lets the whole pipeline run without pretrained weights or datasets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "s2rgap/counter_hash.hpp"
#include "s2rgap/error.hpp"
#include "s2rgap/profile.hpp"
#include "s2rgap/tensor.hpp"

namespace s2r {

struct RefEncoderConfig {
  std::uint64_t seed = 0;
  std::vector<std::size_t> stage_channels{16, 32, 64};
  // Per-stage stride; cumulative resolution 1/4, 1/8, 1/16.
  std::vector<std::size_t> stage_strides{4, 2, 2};
  std::vector<StageId> stage_labels = default_stages();

  void validate() const {
    if (stage_channels.empty()) fail(Errc::parameter, "encoder needs at least one stage");
    if (stage_channels.size() != stage_strides.size() || stage_channels.size() != stage_labels.size()) {
      fail(Errc::parameter, "encoder stage lists must have equal length");
    }
    for (auto c : stage_channels) {
      if (c == 0) fail(Errc::parameter, "encoder stage channels must be >= 1");
    }
    for (auto s : stage_strides) {
      if (s == 0) fail(Errc::parameter, "encoder stage strides must be >= 1");
    }
  }

  std::size_t total_stride() const {
    std::size_t product = 1;
    for (auto s : stage_strides) product *= s;
    return product;
  }
};

struct StageActivation {
  StageId stage;
  Tensor3 activation;
};

namespace detail {

inline constexpr std::uint64_t kWeightStream = 0x5745494748545331ULL;
inline constexpr std::uint64_t kLaneStream = 0x4c414e4553434e31ULL;
inline constexpr std::uint64_t kNoiseStream = 0x4e4f495345494d31ULL;

// 3x3 convolution with edge-replicated borders, given stride, no bias, then
// max(0, x). Weights are He-uniform draws keyed by (seed, layer, out, in, tap).
// Replicated borders keep flat regions flat at the coarse stages.
inline Tensor3 conv3x3_relu(const Tensor3& in, std::size_t out_channels, std::size_t stride,
                            std::uint64_t seed, std::size_t layer) {
  const std::size_t in_channels = in.channels();
  const std::size_t out_h = in.height() / stride;
  const std::size_t out_w = in.width() / stride;
  const double bound = std::sqrt(6.0 / static_cast<double>(in_channels * 9));

  std::vector<double> weights(out_channels * in_channels * 9);
  for (std::size_t o = 0; o < out_channels; ++o) {
    for (std::size_t i = 0; i < in_channels; ++i) {
      for (std::size_t k = 0; k < 9; ++k) {
        const double u = counter_uniform(seed, kWeightStream, layer, o, i, k);
        weights[(o * in_channels + i) * 9 + k] = (2.0 * u - 1.0) * bound;
      }
    }
  }

  const auto h = static_cast<std::ptrdiff_t>(in.height());
  const auto w = static_cast<std::ptrdiff_t>(in.width());
  std::vector<double> out(out_channels * out_h * out_w, 0.0);
  for (std::size_t o = 0; o < out_channels; ++o) {
    for (std::size_t y = 0; y < out_h; ++y) {
      for (std::size_t x = 0; x < out_w; ++x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < in_channels; ++i) {
          const double* wk = &weights[(o * in_channels + i) * 9];
          for (std::ptrdiff_t ky = 0; ky < 3; ++ky) {
            const auto sy = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(y * stride) + ky - 1, 0, h - 1);
            for (std::ptrdiff_t kx = 0; kx < 3; ++kx) {
              const auto sx = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(x * stride) + kx - 1, 0, w - 1);
              acc += wk[ky * 3 + kx] * in(i, static_cast<std::size_t>(sy), static_cast<std::size_t>(sx));
            }
          }
        }
        out[(o * out_h + y) * out_w + x] = std::max(acc, 0.0);
      }
    }
  }
  return Tensor3(out_channels, out_h, out_w, std::move(out));
}

}  // namespace detail

/// Runs the image through every stage. Image extents must be divisible by
/// the product of all strides.
inline std::vector<StageActivation> encode(const Tensor3& image, const RefEncoderConfig& cfg) {
  cfg.validate();
  const std::size_t total = cfg.total_stride();
  if (image.height() % total != 0 || image.width() % total != 0) {
    fail(Errc::shape, "image " + std::to_string(image.height()) + "x" + std::to_string(image.width()) +
                          " is not divisible by the encoder stride " + std::to_string(total));
  }
  std::vector<StageActivation> stages;
  const Tensor3* current = &image;
  for (std::size_t s = 0; s < cfg.stage_channels.size(); ++s) {
    stages.push_back({cfg.stage_labels[s],
                      detail::conv3x3_relu(*current, cfg.stage_channels[s], cfg.stage_strides[s], cfg.seed, s)});
    current = &stages.back().activation;
  }
  return stages;
}

// Lane scene palette (linear RGB in [0, 1]).
inline constexpr double kRoadLevel = 0.22;
inline constexpr double kStripeLevel = 0.90;
inline constexpr double kSkyLevel = 0.90;
inline constexpr double kSceneNoiseAmplitude = 0.04;

inline double luminance(double r, double g, double b) noexcept {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

namespace detail {

struct LaneGeometry {
  double horizon;
  double vanish_x;
  double left_x;
  double right_x;
  double width;

  static LaneGeometry from_seed(std::uint64_t seed, std::size_t h, std::size_t w) {
    const auto fh = static_cast<double>(h);
    const auto fw = static_cast<double>(w);
    auto jitter = [&](std::uint64_t k) { return counter_uniform(seed, kLaneStream, 0xfeed, k) - 0.5; };
    return {fh * (0.38 + 0.06 * jitter(0)), fw * (0.5 + 0.10 * jitter(1)), fw * (0.15 + 0.10 * jitter(2)),
            fw * (0.85 + 0.10 * jitter(3)), fw};
  }

  bool is_sky(std::size_t y) const noexcept { return static_cast<double>(y) + 0.5 < horizon; }

  bool on_stripe(std::size_t y, std::size_t x, double height) const noexcept {
    const double py = static_cast<double>(y) + 0.5;
    if (py <= horizon) return false;
    const double t = (py - horizon) / (height - horizon);
    const double half_width = 0.4 + 0.025 * width * t;
    const double px = static_cast<double>(x) + 0.5;
    for (double bottom : {left_x, right_x}) {
      const double centre = vanish_x + (bottom - vanish_x) * t;
      if (std::abs(px - centre) <= half_width) return true;
    }
    return false;
  }
};

}  // namespace detail

/// 1 where a pixel of gen_lane_scene(seed, height, width) lies on a stripe.
inline std::vector<std::uint8_t> lane_stripe_mask(std::uint64_t seed, std::size_t height, std::size_t width) {
  const auto g = detail::LaneGeometry::from_seed(seed, height, width);
  std::vector<std::uint8_t> mask(height * width, 0);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      mask[y * width + x] = g.on_stripe(y, x, static_cast<double>(height)) ? 1 : 0;
    }
  }
  return mask;
}

/// Dark road below a bright sky, two bright stripes converging on a seeded
/// vanishing point, plus low-amplitude seeded noise.
inline Tensor3 gen_lane_scene(std::uint64_t seed, std::size_t height, std::size_t width) {
  if (height < 32 || width < 32) fail(Errc::parameter, "lane scenes need at least 32x32 pixels");
  const auto g = detail::LaneGeometry::from_seed(seed, height, width);
  const std::size_t plane = height * width;
  std::vector<double> data(3 * plane);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double base = kRoadLevel;
      if (g.is_sky(y)) {
        base = kSkyLevel;
      } else if (g.on_stripe(y, x, static_cast<double>(height))) {
        base = kStripeLevel;
      }
      for (std::size_t c = 0; c < 3; ++c) {
        const double n = (2.0 * counter_uniform(seed, detail::kLaneStream, c, y, x) - 1.0) * kSceneNoiseAmplitude;
        data[c * plane + y * width + x] = std::clamp(base + n, 0.0, 1.0);
      }
    }
  }
  return Tensor3(3, height, width, std::move(data));
}

/// Independent uniform [0, 1) value per pixel and channel.
inline Tensor3 gen_noise(std::uint64_t seed, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) fail(Errc::parameter, "noise images need at least 1x1 pixels");
  const std::size_t plane = height * width;
  std::vector<double> data(3 * plane);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < plane; ++i) data[c * plane + i] = counter_uniform(seed, detail::kNoiseStream, c, i);
  }
  return Tensor3(3, height, width, std::move(data));
}

/// Seed of the index-th image of a synthetic set.
constexpr std::uint64_t image_seed(std::uint64_t set_seed, std::uint64_t index) noexcept {
  return counter_hash(set_seed, 0x494d4147ULL, index);
}

}  // namespace s2r
