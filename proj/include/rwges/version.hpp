#pragma once

namespace rwges {
inline constexpr const char* kVersion = "0.1.0";
}
