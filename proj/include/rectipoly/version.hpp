#pragma once

namespace rectipoly {

inline constexpr const char* kToolName = "rectipoly";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace rectipoly
