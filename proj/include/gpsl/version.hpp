#pragma once

namespace gpsl {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gpsl
