#pragma once

namespace finslab {

inline constexpr const char* kToolName = "finslab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace finslab
