#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace slumber {

/// Fixed six-decimal rendering used by every report. Rounds the exact binary
/// value to nearest with ties to even; negative zero prints as "0.000000".
std::string format_fixed6(double value);

/// Rounds to six decimals with ties to even, as a double.
double round6(double value);

std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace slumber
