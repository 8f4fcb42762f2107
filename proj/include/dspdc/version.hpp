#pragma once

namespace dspdc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dspdc
