#include "ricvol/sn.hpp"

#include <array>
#include <cmath>

namespace ricvol {
namespace {

constexpr int kSeriesTerms = 24;

std::array<double, kSeriesTerms> make_coefficients() {
  // c_n = (-1)^n 2 4^n / (2n+2)!
  std::array<double, kSeriesTerms> c{};
  double pow4 = 1.0;
  double fact = 2.0;  // (2n+2)! at n = 0
  for (int n = 0; n < kSeriesTerms; ++n) {
    c[n] = ((n % 2 == 0) ? 2.0 : -2.0) * pow4 / fact;
    pow4 *= 4.0;
    fact *= static_cast<double>((2 * n + 3) * (2 * n + 4));
  }
  return c;
}

const std::array<double, kSeriesTerms>& coefficients() {
  static const auto c = make_coefficients();
  return c;
}

}  // namespace

double squared_sinc_coefficient(int n) { return coefficients().at(static_cast<std::size_t>(n)); }

double sn(double kappa, double t) {
  const double u = kappa * t * t;
  if (std::abs(u) <= 1.0) {
    // t * sum (-u)^n / (2n+1)!
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 20; ++n) {
      term *= -u / static_cast<double>((2 * n) * (2 * n + 1));
      sum += term;
    }
    return t * sum;
  }
  if (kappa > 0.0) {
    const double q = std::sqrt(kappa);
    return std::sin(q * t) / q;
  }
  const double q = std::sqrt(-kappa);
  return std::sinh(q * t) / q;
}

double sn_prime(double kappa, double t) {
  const double u = kappa * t * t;
  if (std::abs(u) <= 1.0) {
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 20; ++n) {
      term *= -u / static_cast<double>((2 * n - 1) * (2 * n));
      sum += term;
    }
    return sum;
  }
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * t);
  return std::cosh(std::sqrt(-kappa) * t);
}

SquaredSincJet squared_sinc_series(double kappa, double s) {
  const auto& c = coefficients();
  SquaredSincJet j{0, 0, 0, 0, 0, 0};
  // Powers kappa^n s^(n-q) accumulated term by term.
  const double u = kappa * s;
  double un = 1.0;  // u^n
  for (int n = 0; n < kSeriesTerms; ++n) {
    j.h += c[n] * un;
    un *= u;
  }
  // h1 = kappa * sum_{n>=1} n c_n u^{n-1};  m = -kappa * sum_{n>=1} c_n u^{n-1}
  double upow = 1.0;
  for (int n = 1; n < kSeriesTerms; ++n) {
    j.h1 += n * c[n] * upow;
    j.m -= c[n] * upow;
    upow *= u;
  }
  j.h1 *= kappa;
  j.m *= kappa;
  upow = 1.0;
  for (int n = 2; n < kSeriesTerms; ++n) {
    j.h2 += n * (n - 1) * c[n] * upow;
    j.m1 -= (n - 1) * c[n] * upow;
    upow *= u;
  }
  j.h2 *= kappa * kappa;
  j.m1 *= kappa * kappa;
  upow = 1.0;
  for (int n = 3; n < kSeriesTerms; ++n) {
    j.m2 -= (n - 1) * (n - 2) * c[n] * upow;
    upow *= u;
  }
  j.m2 *= kappa * kappa * kappa;
  return j;
}

}  // namespace ricvol
