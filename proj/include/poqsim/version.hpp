#pragma once

namespace poqsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poqsim
