#pragma once

#include <functional>
#include <vector>

namespace ricvol {

/// Nodes and weights on [-1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
Rule1D gauss_legendre(int n);

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Globally adaptive G7-K15 on [a, b] with absolute tolerance `tol`.
IntegralEstimate adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                        double tol, int max_depth = 40);

/// Composite n-point Gauss-Legendre on `panels` equal subintervals.
double composite_gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels,
                                int n = 8);

}  // namespace ricvol
