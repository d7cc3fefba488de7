#pragma once

namespace mfbm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mfbm
