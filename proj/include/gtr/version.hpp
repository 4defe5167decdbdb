#pragma once

namespace gtr {

/// Recorded in output files next to the curve hash.
inline constexpr const char* kEngineVersion = "1.0.0";

}  // namespace gtr
