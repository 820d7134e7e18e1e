#pragma once

namespace socnav {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace socnav
