#pragma once

#include <string_view>

namespace nonrecip::cli {

/// Parses an angle in radians. Accepts plain decimals ("0.785") and pi
/// fractions such as "pi", "-pi/2", "3pi/4", "-3*pi/4", "0.5pi".
/// Throws std::invalid_argument on anything else.
double parse_angle(std::string_view text);

} // namespace nonrecip::cli
