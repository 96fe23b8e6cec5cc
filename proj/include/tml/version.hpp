#pragma once

namespace tml {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tml
