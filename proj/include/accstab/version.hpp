#pragma once

namespace accstab {

inline constexpr const char* kToolName = "accstab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace accstab
