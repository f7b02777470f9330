#pragma once

namespace rpfa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rpfa
