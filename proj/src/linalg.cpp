#include "ricvol/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ricvol {

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Tensor4 Tensor4::change_basis(const Mat3& frame) const {
  // Four successive single-index contractions.
  Tensor4 a, b;
  for (int p = 0; p < 3; ++p)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int i = 0; i < 3; ++i) s += (*this)(i, j, k, l) * frame(i, p);
          a(p, j, k, l) = s;
        }
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int j = 0; j < 3; ++j) s += a(p, j, k, l) * frame(j, q);
          b(p, q, k, l) = s;
        }
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int r = 0; r < 3; ++r)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k) s += b(p, q, k, l) * frame(k, r);
          a(p, q, r, l) = s;
        }
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int r = 0; r < 3; ++r)
        for (int s4 = 0; s4 < 3; ++s4) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) s += a(p, q, r, l) * frame(l, s4);
          b(p, q, r, s4) = s;
        }
  return b;
}

double Tensor4::evaluate(const Vec3& u, const Vec3& v, const Vec3& w, const Vec3& z) const {
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < 3; ++j) {
      if (v[j] == 0.0) continue;
      const double uv = u[i] * v[j];
      for (int k = 0; k < 3; ++k) {
        const double uvw = uv * w[k];
        for (int l = 0; l < 3; ++l) total += uvw * z[l] * (*this)(i, j, k, l);
      }
    }
  }
  return total;
}

Vec3 symmetric_eigenvalues(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace ricvol
