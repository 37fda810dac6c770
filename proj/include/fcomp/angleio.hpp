#pragma once

#include <string>

namespace fcomp::angleio {

/// Parses an angle given as a multiple of pi or a plain number of radians:
/// "pi", "-pi/2", "3pi/4", "0.5pi", "2pi/5", "0", "1.25". Whitespace and an
/// optional '*' before "pi" are accepted. Throws std::invalid_argument with
/// the offending text on anything else.
double parse_angle(const std::string& text);

/// Renders an angle as a compact pi multiple when it is one within 1e-12
/// ("pi/4", "-3pi/8", "0"), otherwise as a plain decimal.
std::string format_angle(double radians);

} // namespace fcomp::angleio
