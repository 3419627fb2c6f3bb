// Fixed-precision number formatting used by every emitted file.
#pragma once

#include <optional>
#include <string>

namespace gazelens {

/// Rounds half away from zero at `decimals` places (half-up for the
/// non-negative quantities this library reports).
double quantize(double value, int decimals);

/// Renders `value` with exactly `decimals` fractional digits, rounding
/// half-up. Independent of the C locale.
std::string format_fixed(double value, int decimals);

/// As above, but renders a missing value as the undefined marker.
std::string format_fixed(const std::optional<double>& value, int decimals);

/// Human-readable marker for an undefined metric.
inline constexpr const char* kUndefinedMarker = "—";

}  // namespace gazelens
