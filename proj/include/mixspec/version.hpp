#pragma once

namespace mixspec {
inline constexpr const char* kVersion = "mixspec 0.1.0";
}
