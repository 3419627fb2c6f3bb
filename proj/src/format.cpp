#include "gazelens/format.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace gazelens {

namespace {

std::int64_t pow10i(int n) {
    std::int64_t p = 1;
    while (n-- > 0) p *= 10;
    return p;
}

}  // namespace

double quantize(double value, int decimals) {
    if (!std::isfinite(value)) return value;
    const double scale = static_cast<double>(pow10i(decimals));
    return static_cast<double>(std::llround(value * scale)) / scale;
}

std::string format_fixed(double value, int decimals) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    const std::int64_t scale = pow10i(decimals);
    const std::int64_t scaled = std::llround(value * static_cast<double>(scale));
    const std::int64_t magnitude = std::llabs(scaled);
    std::string out = scaled < 0 ? "-" : "";
    out += std::to_string(magnitude / scale);
    if (decimals > 0) {
        std::string frac = std::to_string(magnitude % scale);
        out += '.';
        out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
        out += frac;
    }
    return out;
}

std::string format_fixed(const std::optional<double>& value, int decimals) {
    return value ? format_fixed(*value, decimals) : std::string(kUndefinedMarker);
}

}  // namespace gazelens
