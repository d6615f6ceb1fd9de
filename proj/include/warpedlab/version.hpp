#pragma once

namespace warpedlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace warpedlab
