#pragma once

namespace elesim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kBuildId = "elesim-0.1.0";

} // namespace elesim
