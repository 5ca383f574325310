#pragma once

namespace logdet {

/// psi(x) for x > 0: upward recurrence to x >= 10, then the asymptotic
/// Bernoulli series. Absolute error below 1e-13 on (0, 1e6].
double digamma(double x);

/// psi'(x) for x > 0, same scheme.
double trigamma(double x);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace logdet
