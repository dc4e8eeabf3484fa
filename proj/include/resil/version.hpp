#pragma once

#include <string_view>

namespace resil {

inline constexpr std::string_view tool_name = "resil";
inline constexpr std::string_view tool_version = "1.0.0";

}  // namespace resil
