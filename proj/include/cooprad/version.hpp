#pragma once

namespace cooprad {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cooprad
