#pragma once

namespace slope {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace slope
