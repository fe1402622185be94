#pragma once

namespace vnfprof {

inline constexpr const char* kVersion = "0.1.0";

} // namespace vnfprof
