#pragma once

namespace curvlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace curvlab
