#pragma once

#include <string>

namespace fraxonium {

// Locale-independent shortest-form rendering with 12 significant digits.
// All CSV/JSON emitters go through this so identical inputs give identical bytes.
std::string format_double(double value);

// Round-trips a value through format_double.
double round_significant(double value);

}  // namespace fraxonium
