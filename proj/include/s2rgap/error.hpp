#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace s2r {

/// Failure categories. The CLI maps each one onto a documented exit code.
enum class Errc {
  parameter,             // out-of-domain argument (temperature <= 0, bad bin index, ...)
  shape,                 // dimension mismatch or invalid geometry
  config,                // fingerprint / stage-set / exclusion mismatch
  incomplete_input,      // an image is missing a configured stage
  empty_set,             // a profile or average over zero images
  insufficient_samples,  // covariance from fewer than two rows
  degenerate,            // zero-variance histogram
  not_psd,               // matrix square root of a non-PSD matrix
  io,                    // cannot open / read / write a file
  bad_magic,
  unsupported_version,
  unsupported_dtype,
  truncated,
  shape_overflow,
  trailing_data,
  malformed,
  unsupported_format,
  unsupported_maxval,
  unknown_report_format,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parameter: return "parameter";
    case Errc::shape: return "shape";
    case Errc::config: return "config";
    case Errc::incomplete_input: return "incomplete_input";
    case Errc::empty_set: return "empty_set";
    case Errc::insufficient_samples: return "insufficient_samples";
    case Errc::degenerate: return "degenerate";
    case Errc::not_psd: return "not_psd";
    case Errc::io: return "io";
    case Errc::bad_magic: return "bad_magic";
    case Errc::unsupported_version: return "unsupported_version";
    case Errc::unsupported_dtype: return "unsupported_dtype";
    case Errc::truncated: return "truncated";
    case Errc::shape_overflow: return "shape_overflow";
    case Errc::trailing_data: return "trailing_data";
    case Errc::malformed: return "malformed";
    case Errc::unsupported_format: return "unsupported_format";
    case Errc::unsupported_maxval: return "unsupported_maxval";
    case Errc::unknown_report_format: return "unknown_report_format";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace s2r
