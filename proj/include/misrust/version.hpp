#pragma once

namespace misrust {

inline constexpr const char* tool_version = "misrust 1.0.0";

} // namespace misrust
