#pragma once

// Geodesic sphere areas A(t), A'(t) and ball volumes V(t) from rays over the
// sphere of directions, plus the constant-curvature model functions.

#include "ricvol/geodesics.hpp"
#include "ricvol/manifolds.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ricvol {

/// Product rule on the unit sphere of T_pM (orthonormal frame coordinates):
/// Gauss-Legendre in cos(polar angle) x uniform azimuth.
struct SphereQuadrature {
  int level = 1;
  int polar_nodes = 0;
  int azimuth_nodes = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

/// n = 8 * level polar nodes, 2n azimuth nodes.
SphereQuadrature sphere_quadrature(int level);

struct BallOptions {
  RayOptions ray;
  /// Allow t_max above the family's safe radius.
  bool allow_unsafe = false;
  /// When set, recompute at twice the level and throw QuadratureUnderResolved if
  /// A(t_max) moves by more than this relative amount.
  std::optional<double> resolution_tolerance;
};

struct QuadratureMeta {
  int level = 0;
  int directions = 0;
  double step = 0.0;
  double t0 = 0.0;
  double t_max = 0.0;
  int substeps = 0;
  double max_speed_drift = 0.0;
  double max_frame_drift = 0.0;
  bool unsafe_override = false;
};

struct BallProfile {
  std::string family_label;
  std::vector<double> t;
  std::vector<double> A;
  std::vector<double> Aprime;
  std::vector<double> V;
  std::vector<double> ric_radial_int;  ///< int_{S_t} Ric(grad r, grad r) dA
  std::vector<double> scal_int;        ///< int_{S_t} scal dA
  std::vector<double> hess_sq_int;     ///< int_{S_t} |S|^2 dA
  std::vector<double> trS_sq_int;      ///< int_{S_t} (tr S)^2 dA
  std::vector<double> gauss_int;       ///< int_{S_t} 2 K_G dA, K_G = sec(E1,E2) + det S
  std::vector<double> ric_max;         ///< max Ricci eigenvalue over the direction nodes
  std::vector<double> sec_max;         ///< max sectional curvature over the direction nodes
  /// Radii where the integrands lose smoothness (profile joins seen from the pole).
  std::vector<double> nonsmooth_t;
  QuadratureMeta meta;

  std::size_t size() const { return t.size(); }
  double step() const { return meta.step; }
  /// Whether [t[k-half], t[k+half]] avoids nonsmooth_t.
  bool smooth_window(std::size_t k, std::size_t half) const;
  /// Running max of ric_max over samples with t <= t_limit.
  double certified_ric_max(double t_limit) const;
  double certified_sec_max(double t_limit) const;
};

BallProfile ball_functions(const MetricFamily& family, const ChartPoint& p, const BallOptions& opts,
                           const SphereQuadrature& quad);

/// Cumulative integral from the first sample on a uniform grid (Simpson with a
/// 3/8 tail for odd counts).
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

/// Cumulative integral on the uniform grid t of a function that is smooth except
/// at `breaks`: Simpson on each smooth run, and an interval containing a break
/// is split there with a one-sided cubic on each side.
std::vector<double> cumulative_piecewise(const std::vector<double>& t, const std::vector<double>& f,
                                         const std::vector<double>& breaks);

struct DerivativeEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// A''(t) by 4th-order central differences of A'; t must be a grid point with two
/// neighbours on each side (BoundaryPoint otherwise).
DerivativeEstimate second_derivative_A(const BallProfile& profile, double t);

struct ProfilePoint {
  double A = 0.0;
  double V = 0.0;
};
/// A and V between grid points: cubic Hermite of A from (A, A'), integrated
/// exactly for V. Precondition outside [t.front(), t.back()].
ProfilePoint profile_at(const BallProfile& profile, double t);
DerivativeEstimate second_derivative_A_at(const BallProfile& profile, std::size_t index);

/// Simply connected space form of constant curvature kappa.
class ModelSpace {
 public:
  explicit ModelSpace(double kappa) : kappa_(kappa) {}

  double kappa() const { return kappa_; }
  double sn(double t) const;
  double sn_prime(double t) const;
  double sn_second(double t) const { return -kappa_ * sn(t); }
  /// 4 pi sn^2
  double area(double t) const;
  double area_prime(double t) const;
  /// Closed form of int_0^t area.
  double volume(double t) const;

 private:
  double kappa_;
};

ModelSpace model_space(double kappa);

}  // namespace ricvol
