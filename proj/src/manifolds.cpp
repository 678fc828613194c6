#include "ricvol/manifolds.hpp"

#include "ricvol/errors.hpp"
#include "ricvol/sn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ricvol {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

std::string format_param(const char* name, double value) {
  std::ostringstream os;
  os.precision(12);
  os << name << '=' << value;
  return os.str();
}

void zero(MetricValue& m) {
  m.g.setZero();
  for (auto& d : m.dg) d.setZero();
  for (auto& row : m.d2g)
    for (auto& d : row) d.setZero();
}

// g_ij = w(s) delta_ij on the coordinate block [0, n), s = sum_{b<n} x_b^2.
void add_isotropic_block(MetricValue& m, const Vec3& x, int n, double w, double w1, double w2) {
  for (int i = 0; i < n; ++i) {
    m.g(i, i) += w;
    for (int k = 0; k < n; ++k) {
      m.dg[k](i, i) += 2.0 * w1 * x[k];
      for (int l = 0; l < n; ++l)
        m.d2g[l][k](i, i) += 4.0 * w2 * x[l] * x[k] + (k == l ? 2.0 * w1 : 0.0);
    }
  }
}

// (w, w', w'') of w(s) = (1 + k s / 4)^-2
std::array<double, 3> conformal_factor(double kappa, double s) {
  const double q = 1.0 + 0.25 * kappa * s;
  const double q2 = q * q;
  return {1.0 / q2, -0.5 * kappa / (q2 * q), 0.375 * kappa * kappa / (q2 * q2)};
}

std::array<Mat3, 3> bracket_constants_from_matrices(const std::array<Eigen::Matrix2cd, 3>& e) {
  // Decompose each bracket in the real basis {e_k} by least squares on R^8.
  Eigen::Matrix<double, 8, 3> basis;
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        basis(2 * (2 * r + c), k) = e[k](r, c).real();
        basis(2 * (2 * r + c) + 1, k) = e[k](r, c).imag();
      }
  const auto qr = basis.colPivHouseholderQr();
  std::array<Mat3, 3> c{};
  for (auto& m : c) m.setZero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Eigen::Matrix2cd br = e[i] * e[j] - e[j] * e[i];
      Eigen::Matrix<double, 8, 1> v;
      for (int r = 0; r < 2; ++r)
        for (int col = 0; col < 2; ++col) {
          v(2 * (2 * r + col)) = br(r, col).real();
          v(2 * (2 * r + col) + 1) = br(r, col).imag();
        }
      const Vec3 coeffs = qr.solve(v);
      for (int k = 0; k < 3; ++k) c[k](i, j) = coeffs[k];
    }
  return c;
}

void check_finite_positive(double value, const char* what) {
  if (!std::isfinite(value)) throw Error(ErrorKind::ConstraintError, std::string(what) + " must be finite");
}

}  // namespace

std::string to_string(ChartId chart) {
  switch (chart) {
    case ChartId::Conformal: return "conformal";
    case ChartId::Warped: return "warped";
    case ChartId::StereoLine: return "stereo_line";
    case ChartId::Cartesian: return "cartesian";
    case ChartId::Polar: return "polar";
    case ChartId::Group: return "group";
  }
  return "unknown";
}

std::array<Eigen::Matrix2cd, 3> su2_basis() {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  Eigen::Matrix2cd x1, x2, x3;
  x1 << i, 0.0, 0.0, -i;
  x2 << 0.0, 1.0, -1.0, 0.0;
  x3 << 0.0, i, i, 0.0;
  return {x1, x2, x3};
}

// ---------------------------------------------------------------- homogeneous

HomogeneousData HomogeneousData::from_structure(const std::array<Mat3, 3>& structure) {
  HomogeneousData h;
  h.structure = structure;
  const auto c = [&](int k, int i, int j) { return structure[k](i, j); };
  // Koszul formula for left-invariant orthonormal frames.
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        h.connection[k](i, j) = 0.5 * (c(k, i, j) - c(i, j, k) + c(j, k, i));
  const auto G = [&](int k, int i, int j) { return h.connection[k](i, j); };
  // R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            s += G(m, j, k) * G(l, i, m) - G(m, i, k) * G(l, j, m) - c(m, i, j) * G(l, m, k);
          h.riemann(i, j, k, l) = s;
        }
  return h;
}

HomogeneousData HomogeneousData::from_matrix_frame(const std::array<Eigen::Matrix2cd, 3>& frame) {
  return from_structure(bracket_constants_from_matrices(frame));
}

double HomogeneousData::antisymmetry_residual() const {
  double r = 0.0;
  for (int k = 0; k < 3; ++k) r = std::max(r, (structure[k] + structure[k].transpose()).cwiseAbs().maxCoeff());
  return r;
}

double HomogeneousData::jacobi_residual() const {
  // [[e_i,e_j],e_l] + cyclic = 0, coefficient of e_q.
  double r = 0.0;
  const auto c = [&](int k, int i, int j) { return structure[k](i, j); };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l)
        for (int q = 0; q < 3; ++q) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            s += c(m, i, j) * c(q, m, l) + c(m, j, l) * c(q, m, i) + c(m, l, i) * c(q, m, j);
          r = std::max(r, std::abs(s));
        }
  return r;
}

// ---------------------------------------------------------------- profiles

RotProfile RotProfile::sn(double kappa) {
  check_finite_positive(kappa, "profile kappa");
  RotProfile p;
  Segment s;
  s.type = SegmentType::Sn;
  s.kappa = kappa;
  s.r_begin = 0.0;
  s.r_end = kappa > 0.0 ? kPi / std::sqrt(kappa) : kInf;
  p.segments_.push_back(s);
  p.description_ = format_param("sn(kappa", kappa) + ")";
  return p;
}

RotProfile RotProfile::cap(double r0, double delta) {
  if (!(r0 > 0.0 && r0 < kPi / 2.0))
    throw Error(ErrorKind::ConstraintError, "cap metric requires 0 < r0 < pi/2");
  if (!(delta > 0.0 && r0 + delta < kPi))
    throw Error(ErrorKind::ConstraintError, "cap metric requires delta > 0 and r0 + delta < pi");

  const double r1 = r0 + delta;
  const double f0 = std::sin(r0), df0 = std::cos(r0), d2f0 = -std::sin(r0);
  // Value at the far end: trapezoid between the two slopes. Slope 1 and zero
  // second derivative make the tail metric flat.
  const double f1 = f0 + 0.5 * delta * (df0 + 1.0);
  const double df1 = 1.0, d2f1 = 0.0;

  std::array<double, 6> c{f0, df0, 0.5 * d2f0, 0.0, 0.0, 0.0};
  // Solve for c3..c5 from the conditions at u = delta.
  const double d = delta;
  Eigen::Matrix3d a;
  a << d * d * d, d * d * d * d, d * d * d * d * d,
      3 * d * d, 4 * d * d * d, 5 * d * d * d * d,
      6 * d, 12 * d * d, 20 * d * d * d;
  const Vec3 rhs(f1 - (c[0] + c[1] * d + c[2] * d * d),
                 df1 - (c[1] + 2 * c[2] * d),
                 d2f1 - 2 * c[2]);
  const Vec3 sol = a.fullPivLu().solve(rhs);
  c[3] = sol[0];
  c[4] = sol[1];
  c[5] = sol[2];

  RotProfile p;
  Segment s0;
  s0.type = SegmentType::Sn;
  s0.kappa = 1.0;
  s0.r_begin = 0.0;
  s0.r_end = r0;
  Segment s1;
  s1.type = SegmentType::Quintic;
  s1.r_begin = r0;
  s1.r_end = r1;
  s1.c = c;
  Segment s2;
  s2.type = SegmentType::Affine;
  s2.r_begin = r1;
  s2.r_end = kInf;
  s2.slope = df1;
  s2.intercept = f1 - df1 * r1;
  p.segments_ = {s0, s1, s2};
  p.description_ = "cap(" + format_param("r0", r0) + "," + format_param("delta", delta) + ")";

  constexpr int kSamples = 2000;
  for (int i = 0; i <= kSamples; ++i) {
    const double r = r0 + delta * i / kSamples;
    if (!(p.eval(r).f > 0.0)) throw Error(ErrorKind::BadProfile, "cap blend produces f <= 0");
  }
  if (p.join_residual() > 1e-10)
    throw Error(ErrorKind::BadProfile, "cap blend C2 join residual above 1e-10");
  return p;
}

ProfileJet RotProfile::eval_segment(const Segment& s, double r) const {
  switch (s.type) {
    case SegmentType::Sn: {
      const double f = ricvol::sn(s.kappa, r);
      return {f, sn_prime(s.kappa, r), -s.kappa * f};
    }
    case SegmentType::Quintic: {
      const double u = r - s.r_begin;
      const auto& c = s.c;
      const double f = c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * (c[4] + u * c[5]))));
      const double df = c[1] + u * (2 * c[2] + u * (3 * c[3] + u * (4 * c[4] + u * 5 * c[5])));
      const double d2f = 2 * c[2] + u * (6 * c[3] + u * (12 * c[4] + u * 20 * c[5]));
      return {f, df, d2f};
    }
    case SegmentType::Affine:
      return {s.slope * r + s.intercept, s.slope, 0.0};
  }
  return {};
}

const RotProfile::Segment& RotProfile::segment_for(double r) const {
  for (const auto& s : segments_)
    if (r < s.r_end) return s;
  return segments_.back();
}

ProfileJet RotProfile::eval(double r) const { return eval_segment(segment_for(r), r); }

double RotProfile::domain_end() const {
  const auto& last = segments_.back();
  if (last.type == SegmentType::Sn && last.kappa > 0.0) return last.r_end;
  return kInf;
}

bool RotProfile::unbounded_tail() const { return !std::isfinite(domain_end()); }

std::vector<double> RotProfile::breakpoints() const {
  std::vector<double> b;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) b.push_back(segments_[i].r_end);
  return b;
}

double RotProfile::join_residual() const {
  double res = 0.0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double r = segments_[i].r_end;
    const ProfileJet a = eval_segment(segments_[i], r);
    const ProfileJet b = eval_segment(segments_[i + 1], r);
    res = std::max({res, std::abs(a.f - b.f), std::abs(a.df - b.df), std::abs(a.d2f - b.d2f)});
  }
  return res;
}

std::string RotProfile::describe() const { return description_; }

// ---------------------------------------------------------------- families

ChartPoint MetricFamily::base_point() const {
  if (backend == Backend::Homogeneous) return {Vec3::Zero(), ChartId::Group};
  return {Vec3::Zero(), ray_chart};
}

MetricFamily make_space_form(double kappa) {
  check_finite_positive(kappa, "kappa");
  MetricFamily f;
  f.kind = FamilyKind::SpaceForm;
  f.parameter = kappa;
  f.label = "space_form(" + format_param("kappa", kappa) + ")";
  if (kappa > 0.0) {
    // The stereographic chart sends the antipode to infinity, so rays run on S^3 = SU(2)
    // with its bi-invariant metric scaled to curvature kappa.
    auto basis = su2_basis();
    for (auto& x : basis) x *= std::sqrt(kappa);
    f.homogeneous = HomogeneousData::from_matrix_frame(basis);
    f.backend = Backend::Homogeneous;
    f.ray_chart = ChartId::Group;
    f.safe_radius = 0.9 * kPi / std::sqrt(kappa);
  } else {
    f.backend = Backend::Chart;
    f.ray_chart = ChartId::Conformal;
    f.safe_radius = 2.0;
  }
  return f;
}

MetricFamily make_doubly_warped(double a) {
  check_finite_positive(a, "a");
  if (!(a > 1.0)) throw Error(ErrorKind::ConstraintError, "DoublyWarped requires a > 1");
  MetricFamily f;
  f.kind = FamilyKind::DoublyWarped;
  f.parameter = a;
  f.backend = Backend::Chart;
  f.ray_chart = ChartId::Warped;
  f.safe_radius = 1.0;
  f.label = "doubly_warped(" + format_param("a", a) + ")";
  return f;
}

MetricFamily make_berger_sphere(double epsilon) {
  check_finite_positive(epsilon, "epsilon");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::ConstraintError, "BergerSphere requires 0 < epsilon < 1");
  MetricFamily f;
  f.kind = FamilyKind::BergerSphere;
  f.parameter = epsilon;
  auto basis = su2_basis();
  basis[0] /= epsilon;  // {X1/eps, X2, X3} orthonormal
  f.homogeneous = HomogeneousData::from_matrix_frame(basis);
  f.backend = Backend::Homogeneous;
  f.ray_chart = ChartId::Group;
  f.safe_radius = 0.9 * kPi * epsilon;
  f.label = "berger(" + format_param("epsilon", epsilon) + ")";
  return f;
}

MetricFamily make_product_s2r(double kappa) {
  check_finite_positive(kappa, "kappa");
  if (!(kappa > 0.0)) throw Error(ErrorKind::ConstraintError, "ProductS2R requires kappa > 0");
  MetricFamily f;
  f.kind = FamilyKind::ProductS2R;
  f.parameter = kappa;
  f.backend = Backend::Chart;
  f.ray_chart = ChartId::StereoLine;
  f.safe_radius = 0.9 * kPi / std::sqrt(kappa);
  f.label = "product_s2r(" + format_param("kappa", kappa) + ")";
  return f;
}

MetricFamily make_rot_symmetric(RotProfile profile, std::optional<double> safe_radius) {
  MetricFamily f;
  f.kind = FamilyKind::RotSymmetric;
  f.backend = Backend::Chart;
  f.ray_chart = ChartId::Cartesian;
  const double end = profile.domain_end();
  if (safe_radius) {
    f.safe_radius = *safe_radius;
  } else if (std::isfinite(end)) {
    f.safe_radius = 0.9 * end;
  } else {
    const auto b = profile.breakpoints();
    f.safe_radius = b.empty() ? 2.0 : b.back() + 1.0;
  }
  if (!(f.safe_radius > 0.0)) throw Error(ErrorKind::ConstraintError, "safe_radius must be positive");
  f.label = "rot_symmetric(" + profile.describe() + ")";
  f.profile = std::move(profile);
  return f;
}

MetricFamily make_cap_metric(double r0, double delta) {
  return make_rot_symmetric(RotProfile::cap(r0, delta));
}

// ---------------------------------------------------------------- charts

bool in_chart(const MetricFamily& family, const ChartPoint& p) {
  const Vec3& x = p.coords;
  if (!x.allFinite()) return false;
  switch (family.kind) {
    case FamilyKind::SpaceForm:
      if (p.chart == ChartId::Group) return family.backend == Backend::Homogeneous;
      if (p.chart != ChartId::Conformal) return false;
      return family.parameter >= 0.0 || 0.25 * (-family.parameter) * x.squaredNorm() < 1.0;
    case FamilyKind::DoublyWarped:
      return p.chart == ChartId::Warped;
    case FamilyKind::BergerSphere:
      return p.chart == ChartId::Group;
    case FamilyKind::ProductS2R:
      return p.chart == ChartId::StereoLine;
    case FamilyKind::RotSymmetric: {
      const double end = family.profile->domain_end();
      if (p.chart == ChartId::Cartesian) return x.norm() < end;
      if (p.chart == ChartId::Polar) return x[0] > 0.0 && x[0] < end && x[1] > 0.0 && x[1] < kPi;
      return false;
    }
  }
  return false;
}

MetricValue metric_at(const MetricFamily& family, const ChartPoint& p) {
  if (p.chart == ChartId::Group)
    throw Error(ErrorKind::OutOfChart, family.label + ": homogeneous backend has no coordinate chart");
  if (!in_chart(family, p))
    throw Error(ErrorKind::OutOfChart, family.label + ": point outside chart " + to_string(p.chart));

  MetricValue m;
  zero(m);
  const Vec3& x = p.coords;
  switch (family.kind) {
    case FamilyKind::SpaceForm: {
      const auto w = conformal_factor(family.parameter, x.squaredNorm());
      add_isotropic_block(m, x, 3, w[0], w[1], w[2]);
      break;
    }
    case FamilyKind::ProductS2R: {
      const Vec3 xy(x[0], x[1], 0.0);
      const auto w = conformal_factor(family.parameter, xy.squaredNorm());
      add_isotropic_block(m, xy, 2, w[0], w[1], w[2]);
      m.g(2, 2) = 1.0;
      break;
    }
    case FamilyKind::DoublyWarped: {
      const double a = family.parameter;
      const double r = x[0];
      const double u = -(1.0 + a), v = a - 1.0;  // g = dr^2 + e^{2ur} dth^2 + e^{2vr} dph^2
      const double eu = std::exp(2.0 * u * r), ev = std::exp(2.0 * v * r);
      m.g(0, 0) = 1.0;
      m.g(1, 1) = eu;
      m.g(2, 2) = ev;
      m.dg[0](1, 1) = 2.0 * u * eu;
      m.dg[0](2, 2) = 2.0 * v * ev;
      m.d2g[0][0](1, 1) = 4.0 * u * u * eu;
      m.d2g[0][0](2, 2) = 4.0 * v * v * ev;
      break;
    }
    case FamilyKind::RotSymmetric: {
      const RotProfile& prof = *family.profile;
      if (p.chart == ChartId::Polar) {
        const double r = x[0], th = x[1];
        const ProfileJet j = prof.eval(r);
        const double s2 = std::sin(th) * std::sin(th);
        const double sc = std::sin(th) * std::cos(th);
        const double ff = j.f * j.f;
        const double dff = 2.0 * j.f * j.df;
        const double d2ff = 2.0 * (j.df * j.df + j.f * j.d2f);
        m.g(0, 0) = 1.0;
        m.g(1, 1) = ff;
        m.g(2, 2) = ff * s2;
        m.dg[0](1, 1) = dff;
        m.dg[0](2, 2) = dff * s2;
        m.dg[1](2, 2) = ff * 2.0 * sc;
        m.d2g[0][0](1, 1) = d2ff;
        m.d2g[0][0](2, 2) = d2ff * s2;
        m.d2g[0][1](2, 2) = dff * 2.0 * sc;
        m.d2g[1][0](2, 2) = dff * 2.0 * sc;
        m.d2g[1][1](2, 2) = ff * 2.0 * std::cos(2.0 * th);
        break;
      }
      // Cartesian: g_ij = h(s) delta_ij + m(s) x_i x_j, s = |x|^2,
      // h = f(r)^2 / r^2, m = (1 - h)/s.
      const double s = x.squaredNorm();
      double h, h1, h2, mm, m1, m2;
      const double k0 = prof.leading_kappa();
      if (std::sqrt(s) < prof.leading_end() && std::abs(k0 * s) <= 1.0) {
        const SquaredSincJet jet = squared_sinc_series(k0, s);
        h = jet.h, h1 = jet.h1, h2 = jet.h2, mm = jet.m, m1 = jet.m1, m2 = jet.m2;
      } else {
        const double r = std::sqrt(s);
        const ProfileJet j = prof.eval(r);
        const double r3 = r * s, r4 = s * s, r5 = r4 * r;
        h = j.f * j.f / s;
        h1 = j.f * j.df / r3 - j.f * j.f / r4;
        h2 = ((j.df * j.df + j.f * j.d2f) / r3 - 5.0 * j.f * j.df / r4 + 4.0 * j.f * j.f / r5) / (2.0 * r);
        mm = (1.0 - h) / s;
        m1 = -h1 / s - (1.0 - h) / (s * s);
        m2 = -h2 / s + 2.0 * h1 / (s * s) + 2.0 * (1.0 - h) / (s * s * s);
      }
      const auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          m.g(i, j) = h * d(i, j) + mm * x[i] * x[j];
          for (int k = 0; k < 3; ++k) {
            m.dg[k](i, j) = 2.0 * h1 * x[k] * d(i, j) + 2.0 * m1 * x[k] * x[i] * x[j] +
                            mm * (d(i, k) * x[j] + d(j, k) * x[i]);
            for (int l = 0; l < 3; ++l) {
              m.d2g[l][k](i, j) =
                  (4.0 * h2 * x[l] * x[k] + 2.0 * h1 * d(k, l)) * d(i, j) +
                  4.0 * m2 * x[l] * x[k] * x[i] * x[j] +
                  2.0 * m1 * (d(k, l) * x[i] * x[j] + x[k] * (d(i, l) * x[j] + d(j, l) * x[i])) +
                  2.0 * m1 * x[l] * (d(i, k) * x[j] + d(j, k) * x[i]) +
                  mm * (d(i, k) * d(j, l) + d(j, k) * d(i, l));
            }
          }
        }
      break;
    }
    case FamilyKind::BergerSphere:
      break;  // unreachable: rejected by in_chart
  }
  return m;
}

Christoffel christoffel_from_metric(const MetricValue& m, Mat3* inverse) {
  const double scale = m.g.cwiseAbs().maxCoeff();
  const double det = m.g.determinant();
  if (!(scale > 0.0) || !(std::abs(det) > 1e-14 * scale * scale * scale))
    throw Error(ErrorKind::SingularMetric, "metric not invertible to working precision");
  const Mat3 ginv = m.g.inverse();
  if (inverse) *inverse = ginv;
  Christoffel gamma{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vec3 lowered;
      for (int l = 0; l < 3; ++l) lowered[l] = 0.5 * (m.dg[i](j, l) + m.dg[j](i, l) - m.dg[l](i, j));
      const Vec3 raised = ginv * lowered;
      for (int k = 0; k < 3; ++k) gamma[k](i, j) = raised[k];
    }
  return gamma;
}

Christoffel christoffel_at(const MetricFamily& family, const ChartPoint& p) {
  if (p.chart == ChartId::Group) {
    if (!family.homogeneous) throw Error(ErrorKind::OutOfChart, family.label + ": no homogeneous frame");
    return family.homogeneous->connection;
  }
  return christoffel_from_metric(metric_at(family, p));
}

Mat3 metric_matrix(const MetricFamily& family, const ChartPoint& p) {
  if (p.chart == ChartId::Group) {
    if (!family.homogeneous) throw Error(ErrorKind::OutOfChart, family.label + ": no homogeneous frame");
    return Mat3::Identity();
  }
  return metric_at(family, p).g;
}

std::array<TangentVector, 3> orthonormal_frame_at(const MetricFamily& family, const ChartPoint& p) {
  const Mat3 g = metric_matrix(family, p);
  std::array<TangentVector, 3> frame;
  for (int i = 0; i < 3; ++i) {
    Vec3 v = Vec3::Unit(i);
    for (int j = 0; j < i; ++j) {
      const Vec3& e = frame[j].components;
      v -= (e.dot(g * v)) * e;
    }
    const double n2 = v.dot(g * v);
    if (!(n2 > 0.0)) throw Error(ErrorKind::SingularMetric, "Gram-Schmidt hit a null vector");
    v /= std::sqrt(n2);
    // One reorthogonalization pass keeps the residual at roundoff level.
    for (int j = 0; j < i; ++j) {
      const Vec3& e = frame[j].components;
      v -= (e.dot(g * v)) * e;
    }
    v /= std::sqrt(v.dot(g * v));
    frame[i] = TangentVector{p, v};
  }
  return frame;
}

}  // namespace ricvol
