#pragma once

#include <string>

namespace cfrac {

/// Locale-independent 12-significant-digit rendering used by every CSV and
/// text output ("inf", "-inf", "nan" for non-finite values).
[[nodiscard]] std::string format_number(double x);

/// Shortest rendering that reads back to the identical double.
[[nodiscard]] std::string format_roundtrip(double x);

}  // namespace cfrac
