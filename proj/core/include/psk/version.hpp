#pragma once

namespace psk {
inline constexpr const char* kEngineVersion = "0.1.0";
}
