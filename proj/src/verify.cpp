#include "ricvol/verify.hpp"

#include "ricvol/errors.hpp"
#include "ricvol/geodesics.hpp"
#include "ricvol/sn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace ricvol {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCertificateSlack = 1e-9;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CheckRow make_row(double t, double lhs, double rhs, double residual, double tolerance) {
  return {t, lhs, rhs, residual, tolerance, residual <= tolerance};
}

CheckResult start(const std::string& name, const BallProfile& profile) {
  CheckResult r;
  r.name = name;
  r.inputs_digest = digest(profile);
  return r;
}

void require_positive_model_range(double kappa, double t_max, const char* what) {
  if (kappa > 0.0 && t_max > kPi / std::sqrt(kappa) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << what << ": t_max=" << t_max << " exceeds pi/sqrt(kappa)=" << kPi / std::sqrt(kappa);
    throw Error(ErrorKind::Precondition, os.str());
  }
}

void certify_ricci(const BallProfile& profile, double kappa_bound) {
  const double ric = profile.certified_ric_max(profile.meta.t_max);
  if (ric > 2.0 * kappa_bound + kCertificateSlack) {
    std::ostringstream os;
    os.precision(17);
    os << profile.family_label << ": sampled Ricci max " << ric << " exceeds 2*kappa=" << 2.0 * kappa_bound;
    throw Error(ErrorKind::HypothesisViolated, os.str());
  }
}

std::vector<ChartPoint> sample_points(const MetricFamily& family) {
  const ChartPoint base = family.base_point();
  if (base.chart == ChartId::Group) return {base};
  std::vector<ChartPoint> pts{base};
  const double s = std::min(0.25, 0.2 * family.safe_radius);
  const Vec3 offsets[] = {{1.0, 0.0, 0.0}, {-0.3, 0.8, 0.2}, {0.5, -0.4, 0.9}, {-0.6, -0.7, -0.5}};
  for (const Vec3& o : offsets) pts.push_back({base.coords + s * o, base.chart});
  return pts;
}

}  // namespace

void CheckResult::finalize() {
  max_abs_residual = 0.0;
  tolerance = rows.empty() ? 0.0 : rows.front().tolerance;
  worst_ratio = 0.0;
  pass = !rows.empty();
  for (const CheckRow& row : rows) {
    if (std::abs(row.residual) >= max_abs_residual) {
      max_abs_residual = std::abs(row.residual);
      tolerance = row.tolerance;
    }
    const double ratio = row.tolerance > 0.0 ? std::abs(row.residual) / row.tolerance
                                             : (row.residual == 0.0 ? 0.0 : INFINITY);
    worst_ratio = std::max(worst_ratio, ratio);
    pass = pass && row.pass && std::isfinite(row.residual);
  }
}

std::string digest(const BallProfile& profile) {
  const QuadratureMeta& m = profile.meta;
  std::ostringstream os;
  os << "family=" << profile.family_label << " level=" << m.level << " directions=" << m.directions
     << " step=" << fmt(m.step) << " t0=" << fmt(m.t0) << " t_max=" << fmt(m.t_max)
     << " unsafe_override=" << (m.unsafe_override ? "yes" : "no");
  return os.str();
}

CheckResult check_gauss_bonnet_identity(const BallProfile& profile, double rel_tol) {
  CheckResult r = start("gauss_bonnet", profile);
  const std::size_t n = profile.size();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = profile.scal_int[k] - profile.ric_radial_int[k];
  const std::vector<double> cum = cumulative_piecewise(profile.t, g, profile.nonsmooth_t);
  const double t0 = profile.meta.t0;
  const double sliver = g[0] / profile.A[0] * 4.0 / 3.0 * kPi * t0 * t0 * t0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = profile.t[k];
    const double lhs = cum[k] + sliver + profile.Aprime[k];
    const double rhs = 8.0 * kPi * t;
    r.rows.push_back(make_row(t, lhs, rhs, std::abs(lhs - rhs), rel_tol * (1.0 + rhs)));
  }
  r.finalize();
  return r;
}

CheckResult check_constant_curvature_corollary(double kappa, const std::vector<double>& t_set, double tol) {
  CheckResult r;
  r.name = "constant_curvature";
  r.inputs_digest = "model kappa=" + fmt(kappa);
  const ModelSpace m(kappa);
  for (double t : t_set) {
    const double lhs = 4.0 * kappa * m.volume(t) + m.area_prime(t);
    const double rhs = 8.0 * kPi * t;
    r.rows.push_back(make_row(t, lhs, rhs, std::abs(lhs - rhs), tol));
  }
  r.finalize();
  return r;
}

CheckResult check_second_variation(const BallProfile& profile, double rel_tol) {
  CheckResult r = start("second_variation", profile);
  const std::size_t n = profile.size();
  double worst_form2 = 0.0;
  std::size_t skipped = 0;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    if (!profile.smooth_window(k, 2)) {
      ++skipped;
      continue;
    }
    const DerivativeEstimate d = second_derivative_A_at(profile, k);
    const double form1 = -profile.ric_radial_int[k] - profile.hess_sq_int[k] + profile.trS_sq_int[k];
    const double form2 = 8.0 * kPi - (profile.scal_int[k] - profile.ric_radial_int[k]);
    const double res = std::max(std::abs(d.value - form1), std::abs(d.value - form2));
    worst_form2 = std::max(worst_form2, std::abs(d.value - form2));
    r.rows.push_back(make_row(profile.t[k], d.value, form1, res, rel_tol * std::max(8.0 * kPi, std::abs(form1))));
  }
  r.notes.push_back("rhs = int(-Ric(N,N) - |S|^2 + (tr S)^2); residual also covers 8pi - int(scal - Ric(N,N)), max " +
                    fmt(worst_form2));
  if (skipped) r.notes.push_back(std::to_string(skipped) + " stencils across profile joins skipped");
  r.finalize();
  return r;
}

CheckResult check_sphere_gauss_bonnet(const BallProfile& profile, double rel_tol) {
  CheckResult r = start("sphere_gauss_bonnet", profile);
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double lhs = profile.gauss_int[k];
    const double rhs = 8.0 * kPi;
    r.rows.push_back(make_row(profile.t[k], lhs, rhs, std::abs(lhs - rhs), rel_tol * rhs));
  }
  r.finalize();
  return r;
}

ComparisonCheck check_theorem1(const BallProfile& profile, double kappa_bound, double tol) {
  require_positive_model_range(kappa_bound, profile.meta.t_max, "theorem1");
  certify_ricci(profile, kappa_bound);
  ComparisonCheck out;
  out.result = start("theorem1", profile);
  out.curve.name = "theorem1";
  const ModelSpace m(kappa_bound);
  bool nonnegative = true, increasing = true;
  double prev = -INFINITY;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double t = profile.t[k];
    const double lhs = profile.V[k];
    const double rhs = m.volume(t);
    const double margin = lhs - rhs;
    out.curve.t.push_back(t);
    out.curve.lhs.push_back(lhs);
    out.curve.rhs.push_back(rhs);
    out.curve.margin.push_back(margin);
    nonnegative = nonnegative && margin >= -tol;
    increasing = increasing && margin >= prev - tol;
    prev = std::max(prev, margin);
    out.result.rows.push_back(make_row(t, lhs, rhs, std::max(0.0, -margin), tol));
  }
  out.result.notes.push_back("kappa=" + fmt(kappa_bound) + " sampled_ric_max=" +
                             fmt(profile.certified_ric_max(profile.meta.t_max)) + " (certificate over sampled points)");
  out.result.notes.push_back(std::string("margin nonnegative: ") + (nonnegative ? "yes" : "no") +
                             ", nondecreasing: " + (increasing ? "yes" : "no"));
  out.result.finalize();
  return out;
}

ComparisonCheck check_theorem2(const BallProfile& profile, double C, double tol) {
  if (!std::isfinite(C) || C < 0.0)
    throw Error(ErrorKind::HypothesisViolated, "theorem2 needs a finite nonnegative int K+, got " + fmt(C));
  ComparisonCheck out;
  out.result = start("theorem2", profile);
  out.curve.name = "theorem2";
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double t = profile.t[k];
    const double lhs = profile.V[k];
    const double rhs = 4.0 / 3.0 * kPi * t * t * t - C * t * t;
    const double margin = lhs - rhs;
    out.curve.t.push_back(t);
    out.curve.lhs.push_back(lhs);
    out.curve.rhs.push_back(rhs);
    out.curve.margin.push_back(margin);
    out.result.rows.push_back(make_row(t, lhs, rhs, std::max(0.0, -margin), tol));
  }
  out.result.notes.push_back("C=" + fmt(C));
  out.result.finalize();
  return out;
}

KPlusTotal theorem2_constant(const MetricFamily& family, double r_max, double rule_tol) {
  KPlusTotal c;
  try {
    c = total_k_plus(family, r_max);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DivergentIntegral) throw Error(ErrorKind::HypothesisViolated, e.what());
    throw;
  }
  if (c.relative_agreement > rule_tol) {
    std::ostringstream os;
    os << family.label << ": int K+ rules disagree by " << c.relative_agreement << " relative";
    throw Error(ErrorKind::QuadratureUnderResolved, os.str());
  }
  return c;
}

CheckResult check_sturm_monotonicity(const BallProfile& profile, double kappa_bound, double tol) {
  require_positive_model_range(kappa_bound, profile.meta.t_max, "sturm");
  certify_ricci(profile, kappa_bound);
  CheckResult r = start("sturm", profile);
  const ModelSpace m(kappa_bound);
  const double k4 = 4.0 * kappa_bound;
  // W' = sn_4k (Z'' + 4k Z) is only signed while sn_4k > 0.
  const double t_limit = kappa_bound > 0.0 ? kPi / std::sqrt(k4) : INFINITY;
  double running_max = 0.0;
  std::size_t beyond = 0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double t = profile.t[k];
    if (t >= t_limit) {
      ++beyond;
      continue;
    }
    const double Z = profile.V[k] - m.volume(t);
    const double Zp = profile.A[k] - m.area(t);
    const double W = Zp * sn(k4, t) - Z * sn_prime(k4, t);
    const double res = std::max(0.0, running_max - W);
    r.rows.push_back(make_row(t, W, running_max, res, tol));
    running_max = std::max(running_max, W);
  }
  r.notes.push_back("lhs = W(t), rhs = max(0, W(s) for s < t)");
  if (beyond) r.notes.push_back(std::to_string(beyond) + " grid points with t >= pi/sqrt(4 kappa) not assessed");
  r.finalize();
  return r;
}

BishopGunterComparison compare_bishop_gunter(const BallProfile& profile, double sec_bound, double ric_bound,
                                             double tol) {
  const double sec = profile.certified_sec_max(profile.meta.t_max);
  if (sec > sec_bound + kCertificateSlack) {
    std::ostringstream os;
    os.precision(17);
    os << profile.family_label << ": sampled sectional max " << sec << " exceeds bound " << sec_bound;
    throw Error(ErrorKind::HypothesisViolated, os.str());
  }
  certify_ricci(profile, ric_bound);
  require_positive_model_range(sec_bound, profile.meta.t_max, "bishop_gunter");
  require_positive_model_range(ric_bound, profile.meta.t_max, "bishop_gunter");
  BishopGunterComparison out;
  out.result = start("bishop_gunter", profile);
  out.curve.name = "bishop_gunter";
  const ModelSpace ms(sec_bound), mr(ric_bound);
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double t = profile.t[k];
    const double vs = ms.volume(t), vr = mr.volume(t), v = profile.V[k];
    out.v_sectional.push_back(vs);
    out.v_ricci.push_back(vr);
    out.curve.t.push_back(t);
    out.curve.lhs.push_back(v);
    out.curve.rhs.push_back(vr);
    out.curve.margin.push_back(v - vr);
    out.result.rows.push_back(make_row(t, v, vr, std::max({0.0, vs - vr, vr - v}), tol));
  }
  out.result.notes.push_back("sec_bound=" + fmt(sec_bound) + " ric_bound=" + fmt(ric_bound) +
                             "; residual = max(0, V_sec - V_ric, V_ric - V)");
  out.result.finalize();
  return out;
}

ExpectedSpectra expected_spectra(const MetricFamily& family) {
  const double p = family.parameter;
  ExpectedSpectra e;
  switch (family.kind) {
    case FamilyKind::DoublyWarped:
      e.op = Vec3(-(1.0 + p) * (1.0 + p), -(1.0 - p) * (1.0 - p), p * p - 1.0);
      e.ricci = Vec3(-2.0 * (1.0 + p * p), -2.0 * (1.0 + p), 2.0 * (p - 1.0));
      break;
    case FamilyKind::BergerSphere:
      e.op = Vec3(p * p, p * p, 4.0 - 3.0 * p * p);
      e.ricci = Vec3(2.0 * p * p, 4.0 - 2.0 * p * p, 4.0 - 2.0 * p * p);
      break;
    case FamilyKind::ProductS2R:
      e.op = Vec3(p, 0.0, 0.0);
      e.ricci = Vec3(p, p, 0.0);
      break;
    case FamilyKind::SpaceForm:
      e.op = Vec3::Constant(p);
      e.ricci = Vec3::Constant(2.0 * p);
      break;
    default:
      throw Error(ErrorKind::Precondition, family.label + ": no closed-form spectrum");
  }
  std::sort(e.op.begin(), e.op.end());
  std::sort(e.ricci.begin(), e.ricci.end());
  return e;
}

CheckResult check_example_eigenvalues(const MetricFamily& family, double tol) {
  const ExpectedSpectra e = expected_spectra(family);
  CheckResult r;
  r.name = "eigenvalues";
  r.inputs_digest = "family=" + family.label;
  const std::vector<ChartPoint> pts = sample_points(family);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const CurvatureAtPoint c = riemann_at(family, pts[i]);
    for (int j = 0; j < 3; ++j)
      r.rows.push_back(make_row(static_cast<double>(i), c.op_eigenvalues[j], e.op[j],
                                std::abs(c.op_eigenvalues[j] - e.op[j]), tol));
    for (int j = 0; j < 3; ++j)
      r.rows.push_back(make_row(static_cast<double>(i), c.ricci_eigenvalues[j], e.ricci[j],
                                std::abs(c.ricci_eigenvalues[j] - e.ricci[j]), tol));
  }
  r.notes.push_back("t column = sample point index; 3 operator then 3 Ricci eigenvalues per point");
  if (pts.size() == 1) r.notes.push_back("homogeneous backend: curvature is point independent");
  r.finalize();
  return r;
}

CheckResult check_tensor_symmetries(const MetricFamily& family, double tol) {
  CheckResult r;
  r.name = "tensor_symmetries";
  r.inputs_digest = "family=" + family.label;
  const std::vector<ChartPoint> pts = sample_points(family);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Tensor4 R = riemann_at(family, pts[i]).riemann_0_4;
    const double scale = std::max(1.0, R.max_abs());
    const double res =
        std::max({antisymmetry_residual(R), pair_symmetry_residual(R), first_bianchi_residual(R)}) / scale;
    r.rows.push_back(make_row(static_cast<double>(i), res, 0.0, res, tol));
  }
  r.notes.push_back("residuals relative to max(1, max|R_ijkl|)");
  r.finalize();
  return r;
}

CheckResult check_riccati(const MetricFamily& family, double t_max, double tol) {
  CheckResult r;
  r.name = "riccati";
  const ChartPoint p = family.base_point();
  RayOptions opts;
  opts.t_max = t_max;
  opts.step = 0.0025;
  r.inputs_digest = "family=" + family.label + " t_max=" + fmt(t_max) + " step=" + fmt(opts.step);
  std::vector<double> joins;
  if (family.kind == FamilyKind::RotSymmetric && family.profile) joins = family.profile->breakpoints();
  std::size_t skipped = 0;
  const Vec3 dirs[] = {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.48, -0.6, 0.64)};
  for (const Vec3& d : dirs) {
    const RadialData rd = integrate_radial(family, p, direction_from_frame(family, p, d.normalized()), opts);
    for (std::size_t k = 2; k + 2 < rd.samples.size(); ++k) {
      const double lo = rd.samples[k - 2].t, hi = rd.samples[k + 2].t;
      if (std::any_of(joins.begin(), joins.end(), [&](double b) { return b > lo && b < hi; })) {
        ++skipped;
        continue;
      }
      const RaySample& s = rd.samples[k];
      const ShapeOperator S = shape_from_jacobi(s.J, s.Jp);
      const double res = riccati_residual(rd, k) / (1.0 + S.norm_sq);
      r.rows.push_back(make_row(s.t, res, 0.0, res, tol));
    }
  }
  r.notes.push_back("||S' + S^2 + R~|| / (1 + |S|^2), S' by finite differences");
  if (skipped) r.notes.push_back(std::to_string(skipped) + " stencils across profile joins skipped");
  r.finalize();
  return r;
}

CheckResult check_drift(const BallProfile& profile, double tol) {
  CheckResult r = start("drift", profile);
  r.rows.push_back(make_row(profile.meta.t_max, profile.meta.max_speed_drift, 0.0, profile.meta.max_speed_drift, tol));
  r.rows.push_back(make_row(profile.meta.t_max, profile.meta.max_frame_drift, 0.0, profile.meta.max_frame_drift, tol));
  r.notes.push_back("rows: arc-length drift, frame orthonormality drift");
  r.finalize();
  return r;
}

CheckResult check_quadrature_convergence(const BallProfile& coarse, const BallProfile& fine, double tol) {
  if (coarse.size() != fine.size())
    throw Error(ErrorKind::Precondition, "quadrature convergence needs profiles on the same grid");
  CheckResult r = start("quadrature_convergence", coarse);
  r.inputs_digest += " fine_level=" + std::to_string(fine.meta.level);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const double res = std::abs(coarse.A[k] - fine.A[k]) / std::abs(fine.A[k]);
    r.rows.push_back(make_row(coarse.t[k], coarse.A[k], fine.A[k], res, tol));
  }
  r.finalize();
  return r;
}

CheckResult check_volume_derivative(const BallProfile& profile, double rel_tol) {
  CheckResult r = start("volume_derivative", profile);
  const auto& V = profile.V;
  const double h = profile.step();
  std::size_t skipped = 0;
  for (std::size_t k = 2; k + 2 < profile.size(); ++k) {
    if (!profile.smooth_window(k, 2)) {
      ++skipped;
      continue;
    }
    const double dV = (-V[k + 2] + 8.0 * V[k + 1] - 8.0 * V[k - 1] + V[k - 2]) / (12.0 * h);
    const double a = profile.A[k];
    const double t = profile.t[k];
    r.rows.push_back(make_row(t, dV, a, std::abs(dV - a), rel_tol * std::max(a, 4.0 * kPi * t * t)));
  }
  if (skipped) r.notes.push_back(std::to_string(skipped) + " stencils across profile joins skipped");
  r.finalize();
  return r;
}

}  // namespace ricvol
