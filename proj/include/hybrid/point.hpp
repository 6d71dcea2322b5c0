#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hybrid/rational.hpp"

namespace hybrid {

/// Exact coordinates. One-dimensional points print as a bare rational.
using Point = std::vector<Rational>;

std::string to_string(const Point& p);

/// `1/2`, `(1/2)`, `(2, 3)`.
Point parse_point(std::string_view text);

} // namespace hybrid
