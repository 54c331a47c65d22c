#pragma once

// Per-image-set profiles: one averaged histogram per encoder stage, and the
// per-stage comparison of two profiles.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "s2rgap/error.hpp"
#include "s2rgap/histogram.hpp"
#include "s2rgap/tensor.hpp"

namespace s2r {

/// Label of an encoder stage, e.g. "E2".
class StageId {
 public:
  explicit StageId(std::string label) : label_(std::move(label)) {
    if (label_.empty()) fail(Errc::parameter, "stage label must not be empty");
  }

  const std::string& label() const noexcept { return label_; }

  friend auto operator<=>(const StageId&, const StageId&) = default;

 private:
  std::string label_;
};

inline std::vector<StageId> default_stages() {
  return {StageId("E2"), StageId("E3"), StageId("E4")};
}

struct Size {
  std::size_t height = 0;
  std::size_t width = 0;
  friend bool operator==(const Size&, const Size&) = default;
};

/// Upsample target: either the input image resolution or a fixed HxW.
class TargetSize {
 public:
  static TargetSize input() { return TargetSize(std::nullopt); }
  static TargetSize fixed(std::size_t height, std::size_t width) {
    if (height == 0 || width == 0) fail(Errc::parameter, "target size must be at least 1x1");
    return TargetSize(Size{height, width});
  }

  /// Accepts "input" or "HxW".
  static TargetSize parse(std::string_view text) {
    if (text == "input") return input();
    const auto x = text.find('x');
    if (x == std::string_view::npos || x == 0 || x + 1 == text.size()) {
      fail(Errc::parameter, "target size must be 'input' or HxW, got '" + std::string(text) + "'");
    }
    auto parse_dim = [&](std::string_view part) {
      std::size_t value = 0;
      for (char ch : part) {
        if (ch < '0' || ch > '9' || value > 1'000'000) {
          fail(Errc::parameter, "target size must be 'input' or HxW, got '" + std::string(text) + "'");
        }
        value = value * 10 + static_cast<std::size_t>(ch - '0');
      }
      return value;
    };
    return fixed(parse_dim(text.substr(0, x)), parse_dim(text.substr(x + 1)));
  }

  bool is_input() const noexcept { return !size_.has_value(); }
  const std::optional<Size>& size() const noexcept { return size_; }

  std::string to_string() const {
    if (is_input()) return "input";
    return std::to_string(size_->height) + "x" + std::to_string(size_->width);
  }

  friend bool operator==(const TargetSize&, const TargetSize&) = default;

 private:
  explicit TargetSize(std::optional<Size> size) : size_(size) {}
  std::optional<Size> size_;
};

inline constexpr std::string_view kQuantizationRule = "minmax-round-half-up";

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Metric settings shared by every image of a profile.
struct ProfileConfig {
  double temperature = 10.0;
  TargetSize target = TargetSize::input();
  unsigned exclude_below = kDefaultExcludeBelow;
  std::vector<StageId> stages = default_stages();

  void validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
      fail(Errc::parameter, "temperature must be a positive finite number");
    }
    if (exclude_below > kMaxIntensity - 2) {
      fail(Errc::parameter, "exclude_below must leave at least 2 participating bins (<= 253)");
    }
    if (stages.empty()) fail(Errc::parameter, "at least one stage is required");
    std::set<StageId> seen(stages.begin(), stages.end());
    if (seen.size() != stages.size()) fail(Errc::parameter, "stage labels must be unique");
  }

  /// Stable hash of temperature, target size, exclusion range and
  /// quantization rule. Stage selection is compared separately.
  std::string fingerprint() const {
    const std::string canonical = "temperature=" + detail::format_real(temperature) +
                                  ";target=" + target.to_string() +
                                  ";exclude_below=" + std::to_string(exclude_below) +
                                  ";quantization=" + std::string(kQuantizationRule);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(canonical)));
    return buf;
  }

  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct StageHistogram {
  StageId stage;
  IntensityHistogram histogram;
  friend bool operator==(const StageHistogram&, const StageHistogram&) = default;
};

class ImageSetProfile {
 public:
  ImageSetProfile(std::string name, ProfileConfig config, std::uint64_t image_count,
                  std::vector<StageHistogram> stages)
      : name_(std::move(name)), config_(std::move(config)), image_count_(image_count),
        stages_(std::move(stages)) {
    config_.validate();
    if (image_count_ == 0) fail(Errc::empty_set, "profile '" + name_ + "' has no images");
    if (stages_.empty()) fail(Errc::parameter, "profile '" + name_ + "' has no stages");
    std::set<StageId> seen;
    for (const auto& s : stages_) {
      if (!seen.insert(s.stage).second) {
        fail(Errc::parameter, "duplicate stage '" + s.stage.label() + "' in profile '" + name_ + "'");
      }
      if (s.histogram.image_count() != image_count_) {
        fail(Errc::parameter, "stage '" + s.stage.label() + "' image count disagrees with profile");
      }
      if (s.histogram.excluded_below() != config_.exclude_below) {
        fail(Errc::config, "stage '" + s.stage.label() + "' exclusion range disagrees with profile");
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const ProfileConfig& config() const noexcept { return config_; }
  std::string fingerprint() const { return config_.fingerprint(); }
  std::uint64_t image_count() const noexcept { return image_count_; }
  const std::vector<StageHistogram>& stages() const noexcept { return stages_; }

  const IntensityHistogram* find(const StageId& stage) const noexcept {
    for (const auto& s : stages_) {
      if (s.stage == stage) return &s.histogram;
    }
    return nullptr;
  }

  friend bool operator==(const ImageSetProfile&, const ImageSetProfile&) = default;

 private:
  std::string name_;
  ProfileConfig config_;
  std::uint64_t image_count_;
  std::vector<StageHistogram> stages_;
};

struct StageScore {
  StageId stage;
  double score;
  friend bool operator==(const StageScore&, const StageScore&) = default;
};

struct SimilarityReport {
  std::string set_a;
  std::string set_b;
  std::vector<StageScore> scores;
  ProfileConfig config;
  std::string config_fingerprint;
};

/// One stage activation of one image.
struct StageInput {
  std::string image_id;
  StageId stage;
  Tensor3 activation;
};

/// Histogram of a single image's stage activation under the given config.
inline IntensityHistogram stage_histogram(const Tensor3& activation, Size target,
                                          const ProfileConfig& config) {
  const auto attention = attention_map(activation, target.height, target.width, config.temperature);
  return histogram(quantize(attention), config.exclude_below);
}

/// Builds the per-stage averaged histograms of an image set.
///
/// Every image must supply every configured stage exactly once; inputs for
/// stages outside the config are ignored. When the config targets the input
/// resolution, `input_sizes` must hold the resolution of every image.
inline ImageSetProfile build_profile(std::string name, std::span<const StageInput> inputs,
                                     const ProfileConfig& config,
                                     const std::map<std::string, Size>& input_sizes = {}) {
  config.validate();

  std::map<std::string, std::map<StageId, const Tensor3*>> by_image;
  for (const auto& in : inputs) {
    auto& slots = by_image[in.image_id];
    if (std::find(config.stages.begin(), config.stages.end(), in.stage) == config.stages.end()) {
      continue;
    }
    if (!slots.emplace(in.stage, &in.activation).second) {
      fail(Errc::incomplete_input, "image '" + in.image_id + "' supplies stage '" +
                                       in.stage.label() + "' more than once");
    }
  }
  if (by_image.empty()) fail(Errc::empty_set, "image set '" + name + "' has no images");

  std::map<StageId, IntensityHistogram> sums;
  for (const auto& stage : config.stages) sums.emplace(stage, IntensityHistogram(config.exclude_below));

  for (const auto& [image_id, slots] : by_image) {
    Size target;
    if (config.target.is_input()) {
      auto it = input_sizes.find(image_id);
      if (it == input_sizes.end()) {
        fail(Errc::config, "target size 'input' needs the input resolution of image '" + image_id + "'");
      }
      target = it->second;
    } else {
      target = *config.target.size();
    }
    for (const auto& stage : config.stages) {
      auto slot = slots.find(stage);
      if (slot == slots.end()) {
        fail(Errc::incomplete_input, "image '" + image_id + "' is missing stage '" + stage.label() + "'");
      }
      auto& sum = sums.at(stage);
      sum = accumulate(sum, stage_histogram(*slot->second, target, config));
    }
  }

  std::vector<StageHistogram> stages;
  for (const auto& stage : config.stages) stages.push_back({stage, mean_histogram(sums.at(stage))});
  return ImageSetProfile(std::move(name), config, by_image.size(), std::move(stages));
}

/// Per-stage correlation of two profiles built under the same config.
inline SimilarityReport compare_profiles(const ImageSetProfile& a, const ImageSetProfile& b) {
  if (a.fingerprint() != b.fingerprint()) {
    fail(Errc::config, "config fingerprint mismatch: '" + a.name() + "' has " + a.fingerprint() +
                           ", '" + b.name() + "' has " + b.fingerprint());
  }
  auto labels = [](const ImageSetProfile& p) {
    std::set<StageId> out;
    for (const auto& s : p.stages()) out.insert(s.stage);
    return out;
  };
  if (labels(a) != labels(b)) {
    fail(Errc::config, "stage sets of '" + a.name() + "' and '" + b.name() + "' differ");
  }

  SimilarityReport report{a.name(), b.name(), {}, a.config(), a.fingerprint()};
  for (const auto& s : a.stages()) {
    report.scores.push_back({s.stage, correlation(s.histogram, *b.find(s.stage))});
  }
  return report;
}

}  // namespace s2r
