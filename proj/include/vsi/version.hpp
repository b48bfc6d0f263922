#pragma once

namespace vsi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vsi
