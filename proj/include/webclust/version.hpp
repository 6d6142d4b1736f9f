#pragma once

namespace webclust {

inline constexpr const char* kToolName = "webclust";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace webclust
