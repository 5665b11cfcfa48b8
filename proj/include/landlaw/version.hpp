#pragma once

namespace landlaw {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace landlaw
