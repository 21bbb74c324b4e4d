#pragma once

namespace advids {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace advids
