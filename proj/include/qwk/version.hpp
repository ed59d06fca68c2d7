#pragma once

namespace qwk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qwk
