#pragma once

// Radial geodesics from a base point with a parallel orthonormal frame and the
// transverse 2x2 Jacobi matrix J(t): J'' + R~(t) J = 0, R~_ab = <R(E_a, g')g', E_b>.
// det J is the area density of geodesic spheres against the unit round sphere
// and S = J' J^-1 is Hess r restricted to the sphere.

#include "ricvol/linalg.hpp"
#include "ricvol/manifolds.hpp"

#include <optional>
#include <vector>

namespace ricvol {

struct RayOptions {
  double t_max = 1.0;
  /// Target step; the grid is uniform on [t0, t_max] with an even number of steps.
  double step = 0.005;
  /// First grid point. S is singular at t = 0.
  double t0 = 1e-4;
  /// Per-step local error target of the step-halving monitor.
  double step_tolerance = 1e-10;
  int max_halvings = 12;
};

/// Throws Precondition for inconsistent options.
void validate(const RayOptions& opts);

struct RaySample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();  ///< chart coordinates (unused on the homogeneous backend)
  Vec3 velocity = Vec3::Zero();  ///< components in the chart basis or left-invariant frame
  Vec3 e1 = Vec3::Zero(), e2 = Vec3::Zero();
  Mat2 J = Mat2::Zero(), Jp = Mat2::Zero();

  // Curvature at the sample in the orthonormal frame {velocity, e1, e2}.
  double ric_radial = 0.0;   ///< Ric(grad r, grad r)
  double scal = 0.0;
  double sec_tangent = 0.0;  ///< sec(e1, e2)
  Mat2 jacobi_operator = Mat2::Zero();
  double ric_max = 0.0;      ///< largest Ricci eigenvalue
  double sec_max = 0.0;      ///< largest curvature operator eigenvalue

  double lambda() const { return J.determinant(); }
};

struct RadialData {
  MetricFamily family;
  ChartPoint base;
  RayOptions options;
  TangentVector direction;
  double step = 0.0;  ///< actual uniform grid step
  std::vector<RaySample> samples;
  std::optional<double> conjugate_t;
  double max_speed_drift = 0.0;  ///< max |g(g',g') - 1|
  double max_frame_drift = 0.0;  ///< max |g(E_a,E_b) - delta_ab| over {g', E1, E2}
  int substeps = 0;              ///< extra halvings requested by the error monitor
};

RadialData integrate_radial(const MetricFamily& family, const ChartPoint& p, const TangentVector& direction,
                            const RayOptions& opts);

/// Unit direction from orthonormal-frame coordinates at p.
TangentVector direction_from_frame(const MetricFamily& family, const ChartPoint& p, const Vec3& unit);

struct ShapeOperator {
  Mat2 matrix = Mat2::Zero();
  double trace = 0.0;
  double norm_sq = 0.0;
};

ShapeOperator shape_from_jacobi(const Mat2& J, const Mat2& Jp);

/// S at arbitrary t in (t0, t_max]; throws PastConjugate, Precondition.
ShapeOperator shape_operator(const RadialData& rd, double t);

/// Sample state at arbitrary t by short integration from the previous sample.
RaySample sample_at(const RadialData& rd, double t);

/// max over samples with t <= t_small of |tr S - 2/t| / t.
double mean_curvature_small_t_check(const RadialData& rd, double t_small = 0.05);

/// First zero of det J refined by bisection to 1e-8; nullopt if det J > 0 up to t_max.
std::optional<double> conjugate_point_scan(const RadialData& rd);

/// ||S' + S^2 + R~|| at a sample, S' by 5-point central differences.
double riccati_residual(const RadialData& rd, std::size_t index);

}  // namespace ricvol
