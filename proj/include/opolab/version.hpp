#pragma once

namespace opolab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace opolab
