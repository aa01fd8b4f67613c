#pragma once

namespace tailwarn {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace tailwarn
