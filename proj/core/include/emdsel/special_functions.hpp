#pragma once

namespace emdsel {

// Digamma psi(x) for x > 0: upward recurrence to x >= 6, then the asymptotic
// Bernoulli series.  Absolute accuracy ~1e-13 on [1e-3, 1e6].
// Throws std::domain_error for x <= 0.
double digamma(double x);

// Trigamma psi_1(x) for x > 0, same scheme.  Relative accuracy ~1e-13 on
// [1e-3, 1e6]; strictly positive.
double trigamma(double x);

// Tetragamma psi_2(x) for x > 0.  Used for solver Jacobians; accuracy ~1e-10.
double tetragamma(double x);

// Inverse of trigamma on (0, inf): returns x with psi_1(x) = y.
double trigamma_inverse(double y);

}  // namespace emdsel
