#pragma once

namespace driftbench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace driftbench
