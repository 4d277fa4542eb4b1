#pragma once

namespace lntopo {
inline constexpr const char* kVersion = "0.1.0";
}
