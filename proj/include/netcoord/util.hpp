#pragma once

#include <cmath>

namespace netcoord {

// Absolute tolerance for floating-point payoff comparisons. Weak and strict
// comparisons in the update rules route through these so that ties are
// resolved consistently everywhere.
inline constexpr double kPayoffTol = 1e-9;

inline bool approx_eq(double a, double b, double tol = kPayoffTol) { return std::fabs(a - b) <= tol; }
inline bool approx_ge(double a, double b, double tol = kPayoffTol) { return a >= b - tol; }
inline bool approx_gt(double a, double b, double tol = kPayoffTol) { return a > b + tol; }

}  // namespace netcoord
