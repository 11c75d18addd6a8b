// version.hpp — single source of truth for the tool version string.
#pragma once

namespace mmd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mmd
