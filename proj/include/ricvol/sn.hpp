#pragma once

// The model Jacobi amplitude sn_k(t): solution of y'' + k y = 0, y(0) = 0, y'(0) = 1,
// and series helpers that stay accurate as k*t^2 -> 0.

namespace ricvol {

double sn(double kappa, double t);
/// d/dt sn_k(t)
double sn_prime(double kappa, double t);

/// Jet (h, h', h'') in s of h(s) = sn_k(sqrt s)^2 / s, accurate near s = 0.
struct SquaredSincJet {
  double h, h1, h2;
  /// m = (1 - h)/s and its first two s-derivatives
  double m, m1, m2;
};
SquaredSincJet squared_sinc_series(double kappa, double s);

/// Coefficient c_n of h(s) = sum_n c_n (k s)^n; c_0 = 1, c_1 = -1/3, c_2 = 2/45.
double squared_sinc_coefficient(int n);

}  // namespace ricvol
