#include "fraxonium/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace fraxonium {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  const std::string s = format_double(value);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace fraxonium
