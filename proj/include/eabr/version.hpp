#pragma once

namespace eabr {
inline constexpr const char* kVersion = "0.1.0";
}
