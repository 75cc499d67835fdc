#include "cfrac/format.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cfrac {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // Avoid printing "-0".
    if (x == 0.0) x = 0.0;
    return fmt::format("{:.12g}", x);
}

std::string format_roundtrip(double x) {
    if (!std::isfinite(x)) return format_number(x);
    if (x == 0.0) x = 0.0;
    // Shortest representation that reads back to the same double.
    return fmt::format("{}", x);
}

}  // namespace cfrac
