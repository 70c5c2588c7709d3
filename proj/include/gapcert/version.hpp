#pragma once

namespace gapcert {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace gapcert
