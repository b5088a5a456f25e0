#pragma once

namespace swiptbeam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace swiptbeam
