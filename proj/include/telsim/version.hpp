#pragma once

namespace telsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace telsim
