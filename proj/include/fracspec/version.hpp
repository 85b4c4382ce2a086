#pragma once

namespace fracspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracspec
