#pragma once

namespace heiscut {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heiscut
