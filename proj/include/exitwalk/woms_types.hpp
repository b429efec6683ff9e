#pragma once

#include <cstdint>
#include <string_view>

namespace exitwalk {

enum class Side { lower, upper };

inline std::string_view to_string(Side s) { return s == Side::upper ? "upper" : "lower"; }

/// Pair of boundary values (lower <= upper).
struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

}  // namespace exitwalk
