#pragma once

namespace bosonet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bosonet
