#pragma once

// Riemann tensor, curvature operator on bivectors, sectional / Ricci / scalar
// curvature and the positive Ricci part K+.
//
// Sign convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// R(X,Y,Z,W) = <R(X,Y)Z, W>, so that sec(v,w) = R(w,v,v,w) / |v^w|^2 is +1 on the
// unit sphere. In coordinates
//   R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik.

#include "ricvol/linalg.hpp"
#include "ricvol/manifolds.hpp"

namespace ricvol {

/// Connection and curvature in the components used by `p` (chart basis, or
/// the orthonormal left-invariant frame on the homogeneous backend).
struct PointGeometry {
  Mat3 metric = Mat3::Identity();
  Christoffel christoffel{};
  /// riemann_mixed(i,j,k,l) = R^l_ijk
  Tensor4 riemann_mixed;
  /// riemann_lower(i,j,k,l) = R(d_i, d_j, d_k, d_l)
  Tensor4 riemann_lower;
};

PointGeometry geometry_at(const MetricFamily& family, const ChartPoint& p);

/// d_m Gamma^k_ij stored as [m][k](i,j).
std::array<Christoffel, 3> christoffel_derivative(const MetricValue& m, const Mat3& ginv);

struct CurvatureAtPoint {
  Tensor4 riemann;      ///< R^l_ijk as (i,j,k,l), chart basis
  Tensor4 riemann_0_4;  ///< fully lowered, chart basis
  Mat3 frame = Mat3::Identity();  ///< columns: orthonormal_frame_at components
  Mat3 op_matrix = Mat3::Zero();  ///< <R(E_a), E_b> on {e0^e1, e0^e2, e1^e2}
  Vec3 op_eigenvalues = Vec3::Zero();
  Mat3 ricci = Mat3::Zero();      ///< orthonormal frame components
  Vec3 ricci_eigenvalues = Vec3::Zero();
  double scalar = 0.0;
};

/// Curvature operator and Ricci matrix from the lowered tensor in an orthonormal frame.
struct FrameCurvature {
  Mat3 op = Mat3::Zero();
  Mat3 ricci = Mat3::Zero();
};
FrameCurvature frame_curvature(const Tensor4& riemann_orthonormal);

CurvatureAtPoint riemann_at(const MetricFamily& family, const ChartPoint& p);

struct OperatorSpectrum {
  Mat3 matrix = Mat3::Zero();
  Vec3 eigenvalues = Vec3::Zero();
};
OperatorSpectrum curvature_operator_at(const MetricFamily& family, const ChartPoint& p);

/// Throws DegeneratePlane when the Gram determinant is below 1e-14 (relative).
double sectional_at(const MetricFamily& family, const ChartPoint& p, const TangentVector& v,
                    const TangentVector& w);

struct RicciAtPoint {
  Mat3 matrix = Mat3::Zero();
  Vec3 eigenvalues = Vec3::Zero();
  double scalar = 0.0;
};
RicciAtPoint ricci_at(const MetricFamily& family, const ChartPoint& p);

struct KPlusValue {
  double value = 0.0;
};
KPlusValue k_plus_at(const MetricFamily& family, const ChartPoint& p);

/// Integral of K+ over the manifold for a rotationally symmetric family,
/// reduced to r in [0, r_max] with volume density 4 pi f(r)^2.
struct KPlusTotal {
  double value = 0.0;           ///< adaptive Gauss-Kronrod
  double error_estimate = 0.0;  ///< Kronrod-Gauss difference, summed
  double alternative = 0.0;     ///< composite Gauss-Legendre on refined panels
  double relative_agreement = 0.0;
  double r_upper = 0.0;         ///< effective upper limit
};
KPlusTotal total_k_plus(const MetricFamily& family, double r_max);

// Symmetry residuals of a lowered curvature tensor.
double antisymmetry_residual(const Tensor4& r);
double pair_symmetry_residual(const Tensor4& r);
double first_bianchi_residual(const Tensor4& r);

}  // namespace ricvol
