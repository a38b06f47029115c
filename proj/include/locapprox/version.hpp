#pragma once

namespace locapprox {

inline constexpr const char* version = "0.1.0";

}  // namespace locapprox
