#pragma once

// Residual-and-verdict checks of the volume identities and comparison bounds.

#include "ricvol/ballvolume.hpp"
#include "ricvol/curvature.hpp"

#include <string>
#include <vector>

namespace ricvol {

struct CheckRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckResult {
  std::string name;
  std::vector<CheckRow> rows;
  /// Largest residual and the tolerance of that row.
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  /// Largest residual / tolerance over all rows.
  double worst_ratio = 0.0;
  bool pass = false;
  std::string inputs_digest;
  std::vector<std::string> notes;

  /// Fills the summary fields from rows.
  void finalize();
};

struct ComparisonCurve {
  std::string name;
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margin;
};

struct ComparisonCheck {
  ComparisonCurve curve;
  CheckResult result;
};

std::string digest(const BallProfile& profile);

/// int_{B_t}(scal - Ric(N,N)) dV + A' - 8 pi t, tolerance rel_tol (1 + 8 pi t).
CheckResult check_gauss_bonnet_identity(const BallProfile& profile, double rel_tol = 1e-4);

/// 4k V_k + A_k' - 8 pi t from closed forms.
CheckResult check_constant_curvature_corollary(double kappa, const std::vector<double>& t_set, double tol = 1e-12);

/// Finite-difference A'' against int(-Ric(N,N) - |S|^2 + (tr S)^2) dA and
/// against 8 pi - int(scal - Ric(N,N)) dA; residual is the larger difference.
CheckResult check_second_variation(const BallProfile& profile, double rel_tol = 1e-4);

/// int 2 K_G dA - 8 pi.
CheckResult check_sphere_gauss_bonnet(const BallProfile& profile, double rel_tol = 1e-4);

/// V - V_k >= -tol. Throws HypothesisViolated unless the sampled Ricci maximum is
/// at most 2 kappa + 1e-9, Precondition if t_max > pi / sqrt(kappa).
ComparisonCheck check_theorem1(const BallProfile& profile, double kappa_bound, double tol = 1e-6);

/// V - (4/3 pi t^3 - C t^2) >= -tol.
ComparisonCheck check_theorem2(const BallProfile& profile, double C, double tol = 1e-6);

/// C = int K+ for a rotationally symmetric family. DivergentIntegral becomes
/// HypothesisViolated; disagreement of the two rules beyond rule_tol is
/// QuadratureUnderResolved.
KPlusTotal theorem2_constant(const MetricFamily& family, double r_max = 50.0, double rule_tol = 1e-6);

/// W = Z' sn_4k - Z sn_4k' with Z = V - V_k: W >= -tol and W(t2) >= W(t1) - tol.
CheckResult check_sturm_monotonicity(const BallProfile& profile, double kappa_bound, double tol = 1e-6);

struct BishopGunterComparison {
  ComparisonCurve curve;  ///< lhs = V, rhs = V_ric model
  std::vector<double> v_sectional;
  std::vector<double> v_ricci;
  CheckResult result;     ///< V_sec <= V_ric <= V within tol
};

/// Both model bounds on the profile grid. Throws HypothesisViolated if the
/// sampled sectional maximum exceeds sec_bound or the Ricci maximum exceeds 2 ric_bound.
BishopGunterComparison compare_bishop_gunter(const BallProfile& profile, double sec_bound, double ric_bound,
                                             double tol = 1e-6);

/// Closed-form curvature operator and Ricci spectra of the three examples.
struct ExpectedSpectra {
  Vec3 op;
  Vec3 ricci;
};
ExpectedSpectra expected_spectra(const MetricFamily& family);

/// Computed spectra at five points against expected_spectra. Precondition for
/// other families.
CheckResult check_example_eigenvalues(const MetricFamily& family, double tol = 1e-9);

// Property checks.

/// Antisymmetry, pair symmetry and first Bianchi residuals at sample points.
CheckResult check_tensor_symmetries(const MetricFamily& family, double tol = 1e-10);
/// Riccati residual along a few rays, relative to 1 + |S|^2.
CheckResult check_riccati(const MetricFamily& family, double t_max, double tol = 1e-6);
/// Arc-length and frame drift recorded in the profile.
CheckResult check_drift(const BallProfile& profile, double tol = 1e-8);
/// A(t_max) under doubling of the direction level.
CheckResult check_quadrature_convergence(const BallProfile& coarse, const BallProfile& fine, double tol = 1e-7);
/// V' = A by central differences of V.
CheckResult check_volume_derivative(const BallProfile& profile, double rel_tol = 1e-5);

}  // namespace ricvol
