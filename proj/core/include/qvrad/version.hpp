#pragma once

namespace qvrad {

inline constexpr char const* tool_version = "0.1.0";

}  // namespace qvrad
