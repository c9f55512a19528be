#pragma once

// First-run calibration values, frozen. Regenerate with `acceptance --calibrate`
// and only when the underlying algorithm changes on purpose.
namespace baseline {

// best exponent of |A + xA| / |A| for Cantor(4,{0,3}) at n = 16, x in [1,2) at depth 8
inline constexpr double kCantorExponent = 0.5989;

// good fraction over 360 uniform angles for Cantor(3,{0,2})^2 at n = 12, epsilon 0.05
inline constexpr double kProjectionGoodFraction = 1.0;

}  // namespace baseline
