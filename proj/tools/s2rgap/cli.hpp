#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "s2rgap/error.hpp"
#include "s2rgap/profile.hpp"

namespace s2r::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFormat = 4;
inline constexpr int kExitConfig = 5;
inline constexpr int kExitShape = 6;
inline constexpr int kExitInput = 7;
inline constexpr int kExitDegenerate = 8;

int exit_code_for(Errc code) noexcept;

enum class EncoderMode { automatic, manifest, reference };

struct RunConfig {
  ProfileConfig profile;  // temperature 10, target "input", exclude_below 100, stages E2,E3,E4
  EncoderMode encoder = EncoderMode::automatic;
  std::uint64_t seed = 0;

  std::string fingerprint() const { return profile.fingerprint(); }
};

/// Builds (or loads, for a cached profile file) the profile of one set:
/// an image directory, a manifest, or a profile JSON written by `hist`.
ImageSetProfile resolve_set(const std::filesystem::path& source, const RunConfig& config);

/// Runs one invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace s2r::cli
