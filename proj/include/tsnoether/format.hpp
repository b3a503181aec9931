#pragma once

#include <string>

namespace tsn {

/// Shortest decimal string that round-trips to exactly this double.
std::string format_double(double v);

} // namespace tsn
