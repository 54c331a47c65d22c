#pragma once

#include <string_view>

namespace s2r {

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace s2r
