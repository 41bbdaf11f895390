#pragma once

namespace tauthresh {

inline constexpr const char* version_string = "tauthresh 0.1.0";

} // namespace tauthresh
