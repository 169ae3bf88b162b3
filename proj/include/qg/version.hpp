#pragma once

namespace qg {

inline constexpr const char* version_string = "qg 1.0.0";

} // namespace qg
