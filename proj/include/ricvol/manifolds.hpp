#pragma once

// Catalogue of explicit 3-dimensional metrics with exact first and second
// derivatives of the metric components.

#include "ricvol/linalg.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ricvol {

/// Coordinate systems used by the catalogue.
enum class ChartId {
  Conformal,   ///< space forms: g = delta / (1 + k|x|^2/4)^2
  Warped,      ///< doubly warped product: (r, theta, phi)
  StereoLine,  ///< S^2(k) x R: stereographic plane x line
  Cartesian,   ///< rotationally symmetric metric in Cartesian coordinates about the pole
  Polar,       ///< rotationally symmetric metric in (r, theta, phi)
  Group,       ///< homogeneous backend: components are taken in the left-invariant frame
};

std::string to_string(ChartId chart);

struct ChartPoint {
  Vec3 coords = Vec3::Zero();
  ChartId chart = ChartId::Conformal;
};

struct TangentVector {
  ChartPoint base;
  Vec3 components = Vec3::Zero();
};

struct MetricValue {
  Mat3 g = Mat3::Identity();
  MetricGradient dg{};
  MetricHessian d2g{};
};

enum class FamilyKind { SpaceForm, DoublyWarped, BergerSphere, ProductS2R, RotSymmetric };
enum class Backend { Chart, Homogeneous };

/// Left-invariant geometry of a 3-dimensional Lie group in a g-orthonormal frame.
struct HomogeneousData {
  /// structure[k](i,j) = c^k_ij with [e_i, e_j] = c^k_ij e_k
  std::array<Mat3, 3> structure{};
  /// nabla_{e_i} e_j = connection[k](i,j) e_k
  Christoffel connection{};
  /// R(e_i,e_j,e_k,e_l) = <R(e_i,e_j)e_k, e_l>
  Tensor4 riemann;

  static HomogeneousData from_structure(const std::array<Mat3, 3>& structure);
  /// Structure constants of the real span of three complex 2x2 matrices, declared orthonormal.
  static HomogeneousData from_matrix_frame(const std::array<Eigen::Matrix2cd, 3>& frame);

  double antisymmetry_residual() const;
  double jacobi_residual() const;
};

/// Value and first two derivatives of a warping function.
struct ProfileJet {
  double f = 0.0, df = 0.0, d2f = 0.0;
};

/// Piecewise-analytic warping function f(r) with f(0) = 0, f'(0) = 1.
///
/// The first segment is always sn_k on [0, r1); later segments are quintic
/// blends or affine tails joined with C^2 continuity.
class RotProfile {
 public:
  static RotProfile sn(double kappa);
  /// sin r on [0, r0], quintic blend on [r0, r0+delta], f = r + beta afterwards.
  static RotProfile cap(double r0, double delta);

  ProfileJet eval(double r) const;
  double leading_kappa() const { return segments_.front().kappa; }
  /// Radius where the leading segment ends (infinity for a lone segment).
  double leading_end() const { return segments_.front().r_end; }
  /// First positive zero of f, or +infinity.
  double domain_end() const;
  /// Whether the last segment extends to r = +infinity.
  bool unbounded_tail() const;
  /// Interior segment boundaries.
  std::vector<double> breakpoints() const;
  /// Largest |f, f', f''| mismatch over interior joins.
  double join_residual() const;
  std::string describe() const;

 private:
  enum class SegmentType { Sn, Quintic, Affine };
  struct Segment {
    SegmentType type = SegmentType::Sn;
    double r_begin = 0.0, r_end = 0.0;
    double kappa = 0.0;              // Sn
    std::array<double, 6> c{};       // Quintic in u = r - r_begin
    double slope = 0.0, intercept = 0.0;  // Affine
  };
  ProfileJet eval_segment(const Segment& s, double r) const;
  const Segment& segment_for(double r) const;

  std::vector<Segment> segments_;
  std::string description_;
};

struct MetricFamily {
  FamilyKind kind = FamilyKind::SpaceForm;
  /// k for SpaceForm and ProductS2R, a for DoublyWarped, epsilon for BergerSphere.
  double parameter = 0.0;
  std::optional<RotProfile> profile;
  std::optional<HomogeneousData> homogeneous;
  /// Backend used for radial geodesics.
  Backend backend = Backend::Chart;
  /// Chart carrying rays (Group for the homogeneous backend).
  ChartId ray_chart = ChartId::Conformal;
  double safe_radius = 1.0;
  std::string label;

  ChartPoint base_point() const;
};

MetricFamily make_space_form(double kappa);
MetricFamily make_doubly_warped(double a);
MetricFamily make_berger_sphere(double epsilon);
MetricFamily make_product_s2r(double kappa);
MetricFamily make_rot_symmetric(RotProfile profile, std::optional<double> safe_radius = std::nullopt);
MetricFamily make_cap_metric(double r0, double delta);

bool in_chart(const MetricFamily& family, const ChartPoint& p);

/// Exact g, dg, d2g. Throws OutOfChart.
MetricValue metric_at(const MetricFamily& family, const ChartPoint& p);

/// Levi-Civita connection coefficients. Throws OutOfChart, SingularMetric.
Christoffel christoffel_at(const MetricFamily& family, const ChartPoint& p);
Christoffel christoffel_from_metric(const MetricValue& m, Mat3* inverse = nullptr);

/// Gram-Schmidt on d_0, d_1, d_2 in that order; the left-invariant frame itself on Group.
std::array<TangentVector, 3> orthonormal_frame_at(const MetricFamily& family, const ChartPoint& p);

/// Metric on the components of `p` (identity on Group).
Mat3 metric_matrix(const MetricFamily& family, const ChartPoint& p);

/// 2x2 complex basis {X1, X2, X3} of su(2).
std::array<Eigen::Matrix2cd, 3> su2_basis();

}  // namespace ricvol
