#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>

namespace ricvol {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;

/// dg[k](i,j) = d_k g_ij
using MetricGradient = std::array<Mat3, 3>;
/// d2g[l][k](i,j) = d_l d_k g_ij
using MetricHessian = std::array<std::array<Mat3, 3>, 3>;
/// gamma[k](i,j) = Gamma^k_ij, i.e. nabla_{d_i} d_j = Gamma^k_ij d_k
using Christoffel = std::array<Mat3, 3>;

/// Dense rank-4 array over a 3-dimensional index space.
class Tensor4 {
 public:
  Tensor4() { data_.fill(0.0); }

  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  double max_abs() const;

  /// Components in a new basis: out(a,b,c,d) = T(i,j,k,l) F(i,a) F(j,b) F(k,c) F(l,d),
  /// where the columns of F hold the new basis vectors in old components.
  Tensor4 change_basis(const Mat3& frame) const;

  /// T(u, v, w, z) for vectors given in the tensor's basis.
  double evaluate(const Vec3& u, const Vec3& v, const Vec3& w, const Vec3& z) const;

 private:
  static constexpr std::size_t index(int i, int j, int k, int l) {
    return static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l);
  }
  std::array<double, 81> data_;
};

/// Ascending eigenvalues of a symmetric 3x3 matrix.
Vec3 symmetric_eigenvalues(const Mat3& m);

/// Bivector basis order used everywhere: e0^e1, e0^e2, e1^e2.
inline constexpr std::array<std::array<int, 2>, 3> kBivectorBasis{{{0, 1}, {0, 2}, {1, 2}}};

}  // namespace ricvol
