#pragma once

// Report, profile and histogram-table serialization. All output is
// deterministic: identical inputs give identical bytes.

#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "s2rgap/error.hpp"
#include "s2rgap/profile.hpp"
#include "s2rgap/version.hpp"

namespace s2r {

enum class ReportFormat { json, csv };

inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  fail(Errc::unknown_report_format, "unknown report format '" + std::string(name) + "' (expected json or csv)");
}

inline constexpr int kReportSchema = 1;

namespace detail {

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Shortest round-trip decimal form.
inline std::string shortest(double v) { return nlohmann::json(v).dump(); }

inline nlohmann::ordered_json config_json(const ProfileConfig& c) {
  nlohmann::ordered_json j;
  j["temperature"] = c.temperature;
  j["target_size"] = c.target.to_string();
  j["exclude_below"] = c.exclude_below;
  j["quantization"] = std::string(kQuantizationRule);
  j["fingerprint"] = c.fingerprint();
  return j;
}

inline void require_consistent(std::span<const SimilarityReport> reports) {
  if (reports.empty()) fail(Errc::empty_set, "no comparisons to report");
  for (const auto& r : reports) {
    if (r.config_fingerprint != reports.front().config_fingerprint) {
      fail(Errc::config, "reports with different config fingerprints cannot share one output");
    }
    if (r.scores.size() != reports.front().scores.size()) {
      fail(Errc::config, "reports with different stage sets cannot share one output");
    }
    for (std::size_t i = 0; i < r.scores.size(); ++i) {
      if (r.scores[i].stage != reports.front().scores[i].stage) {
        fail(Errc::config, "reports with different stage sets cannot share one output");
      }
    }
  }
}

}  // namespace detail

/// JSON: {schema, tool_version, config: {...}, pairs: [{set_a, set_b, scores}]}.
/// CSV: one row per set pair, one column per stage, scores to 4 decimals.
inline std::string write_report(std::span<const SimilarityReport> reports, ReportFormat format) {
  detail::require_consistent(reports);
  const auto& first = reports.front();

  if (format == ReportFormat::json) {
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["tool_version"] = std::string(kToolVersion);
    doc["config"] = detail::config_json(first.config);
    doc["pairs"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json pair;
      pair["set_a"] = r.set_a;
      pair["set_b"] = r.set_b;
      pair["scores"] = nlohmann::ordered_json::object();
      for (const auto& s : r.scores) pair["scores"][s.stage.label()] = s.score;
      doc["pairs"].push_back(std::move(pair));
    }
    return doc.dump(2) + "\n";
  }

  std::string out = "set_a,set_b";
  for (const auto& s : first.scores) out += "," + s.stage.label();
  out += ",config_fingerprint\n";
  for (const auto& r : reports) {
    out += r.set_a + "," + r.set_b;
    for (const auto& s : r.scores) out += "," + detail::fixed4(s.score);
    out += "," + r.config_fingerprint + "\n";
  }
  return out;
}

inline std::string write_report(const SimilarityReport& report, ReportFormat format) {
  return write_report(std::span<const SimilarityReport>(&report, 1), format);
}

inline constexpr std::string_view kProfileKind = "s2rgap-profile";

/// Cached profile: averaged histograms plus the config they were built with.
inline std::string profile_to_json(const ImageSetProfile& p) {
  nlohmann::ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["kind"] = std::string(kProfileKind);
  doc["tool_version"] = std::string(kToolVersion);
  doc["name"] = p.name();
  doc["image_count"] = p.image_count();
  doc["config"] = detail::config_json(p.config());
  doc["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : p.stages()) {
    nlohmann::ordered_json stage;
    stage["stage"] = s.stage.label();
    stage["bins"] = s.histogram.bins();
    doc["stages"].push_back(std::move(stage));
  }
  return doc.dump(2) + "\n";
}

inline bool looks_like_profile(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    return doc.is_object() && doc.value("kind", "") == kProfileKind;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

inline ImageSetProfile profile_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<int>() != kReportSchema) fail(Errc::unsupported_version, "unsupported profile schema");
    if (doc.at("kind").get<std::string>() != kProfileKind) fail(Errc::malformed, "not a profile document");
    const auto& cfg = doc.at("config");
    ProfileConfig config;
    config.temperature = cfg.at("temperature").get<double>();
    config.target = TargetSize::parse(cfg.at("target_size").get<std::string>());
    config.exclude_below = cfg.at("exclude_below").get<unsigned>();
    if (cfg.at("quantization").get<std::string>() != kQuantizationRule) {
      fail(Errc::config, "profile uses unknown quantization rule");
    }
    const auto image_count = doc.at("image_count").get<std::uint64_t>();
    std::vector<StageHistogram> stages;
    config.stages.clear();
    for (const auto& s : doc.at("stages")) {
      const auto bins = s.at("bins").get<std::vector<double>>();
      if (bins.size() != kBinCount) fail(Errc::malformed, "profile histogram must have 256 bins");
      IntensityHistogram::Bins array{};
      std::copy(bins.begin(), bins.end(), array.begin());
      StageId stage(s.at("stage").get<std::string>());
      config.stages.push_back(stage);
      stages.push_back({stage, IntensityHistogram(array, config.exclude_below, image_count)});
    }
    ImageSetProfile profile(doc.at("name").get<std::string>(), config, image_count, std::move(stages));
    if (cfg.contains("fingerprint") && cfg.at("fingerprint").get<std::string>() != profile.fingerprint()) {
      fail(Errc::config, "profile fingerprint does not match its config");
    }
    return profile;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::malformed, std::string("malformed profile: ") + e.what());
  }
}

/// Plot-ready averaged histograms: one row per (stage, bin).
inline std::string write_histogram_table(const ImageSetProfile& p) {
  std::string out = "# set=" + p.name() + " images=" + std::to_string(p.image_count()) +
                    " fingerprint=" + p.fingerprint() + " exclude_below=" +
                    std::to_string(p.config().exclude_below) + "\n";
  out += "stage,bin,excluded,mean_count\n";
  for (const auto& s : p.stages()) {
    for (std::size_t bin = 0; bin < kBinCount; ++bin) {
      out += s.stage.label() + "," + std::to_string(bin) + "," +
             (bin <= s.histogram.excluded_below() ? "1" : "0") + "," + detail::shortest(s.histogram[bin]) + "\n";
    }
  }
  return out;
}

}  // namespace s2r
