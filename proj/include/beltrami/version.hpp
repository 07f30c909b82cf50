#pragma once

namespace beltrami {
inline constexpr const char* kVersion = "0.1.0";
}
