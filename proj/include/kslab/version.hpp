#pragma once

namespace kslab {

inline constexpr const char* version = "1.0.0";
inline constexpr const char* report_schema = "kslab/1";

} // namespace kslab
