#pragma once

namespace turbeam {

// Speed of light in vacuum, m/s. All quantities in this library are SI.
inline constexpr double kSpeedOfLight = 2.99792458e8;

// Normalization area S for the sum-to-integral convention
// sum_q -> (S/(2pi)^2) Int d^2q. S cancels in every observable; it is kept
// as an explicit bookkeeping constant.
inline constexpr double kNormArea = 1.0;

}  // namespace turbeam
