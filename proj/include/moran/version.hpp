#pragma once

namespace moran {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace moran
