#pragma once

namespace zinb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zinb
