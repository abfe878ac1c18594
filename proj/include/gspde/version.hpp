#pragma once

namespace gspde {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gspde
