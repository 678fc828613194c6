#include "ricvol/geodesics.hpp"

#include "ricvol/curvature.hpp"
#include "ricvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ricvol {
namespace {

using State = Eigen::Matrix<double, 20, 1>;

// Layout: x[0..3) v[3..6) E1[6..9) E2[9..12) J[12..16) J'[16..20), 2x2 blocks column-major.
Vec3 seg3(const State& y, int o) { return y.segment<3>(o); }
Mat2 mat2(const State& y, int o) {
  Mat2 m;
  m << y[o], y[o + 2], y[o + 1], y[o + 3];
  return m;
}
void put2(State& y, int o, const Mat2& m) {
  y[o] = m(0, 0);
  y[o + 1] = m(1, 0);
  y[o + 2] = m(0, 1);
  y[o + 3] = m(1, 1);
}

Vec3 contract_gamma(const Christoffel& G, const Vec3& a, const Vec3& b) {
  return Vec3(a.dot(G[0] * b), a.dot(G[1] * b), a.dot(G[2] * b));
}

class RayIntegrator {
 public:
  RayIntegrator(const MetricFamily& family, const ChartPoint& base, const RayOptions& opts)
      : family_(family), chart_(base.chart), opts_(opts), homogeneous_(base.chart == ChartId::Group) {
    if (homogeneous_) fixed_ = geometry_at(family, base);
  }

  PointGeometry geometry(const State& y) const {
    if (homogeneous_) return fixed_;
    return geometry_at(family_, ChartPoint{seg3(y, 0), chart_});
  }

  State rhs(const State& y) const {
    const PointGeometry geo = geometry(y);
    const Vec3 v = seg3(y, 3), e1 = seg3(y, 6), e2 = seg3(y, 9);
    State dy;
    dy.segment<3>(0) = homogeneous_ ? Vec3::Zero() : v;
    dy.segment<3>(3) = -contract_gamma(geo.christoffel, v, v);
    dy.segment<3>(6) = -contract_gamma(geo.christoffel, v, e1);
    dy.segment<3>(9) = -contract_gamma(geo.christoffel, v, e2);
    const Mat2 Rt = jacobi_operator(geo, v, e1, e2);
    const Mat2 J = mat2(y, 12), Jp = mat2(y, 16);
    put2(dy, 12, Jp);
    put2(dy, 16, -Rt * J);
    return dy;
  }

  static Mat2 jacobi_operator(const PointGeometry& geo, const Vec3& v, const Vec3& e1, const Vec3& e2) {
    const Tensor4& R = geo.riemann_lower;
    Mat2 m;
    m(0, 0) = R.evaluate(e1, v, v, e1);
    m(0, 1) = R.evaluate(e1, v, v, e2);
    m(1, 0) = m(0, 1);
    m(1, 1) = R.evaluate(e2, v, v, e2);
    return m;
  }

  State rk4(const State& y, double h) const {
    const State k1 = rhs(y);
    const State k2 = rhs(y + 0.5 * h * k1);
    const State k3 = rhs(y + 0.5 * h * k2);
    const State k4 = rhs(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // One step of size h with a full-vs-two-halves Richardson monitor; steps that miss
  // the tolerance are split recursively.
  State advance(const State& y, double h, int depth, int& substeps) const {
    const State full = rk4(y, h);
    const State half = rk4(rk4(y, 0.5 * h), 0.5 * h);
    double err = 0.0;
    for (int i = 0; i < 20; ++i) err = std::max(err, std::abs(half[i] - full[i]) / (1.0 + std::abs(half[i])));
    err /= 15.0;
    if (err > opts_.step_tolerance && depth < opts_.max_halvings) {
      ++substeps;
      const State mid = advance(y, 0.5 * h, depth + 1, substeps);
      return advance(mid, 0.5 * h, depth + 1, substeps);
    }
    return half + (half - full) / 15.0;
  }

  void check_chart(const State& y, double t) const {
    if (homogeneous_) return;
    if (!in_chart(family_, ChartPoint{seg3(y, 0), chart_})) {
      std::ostringstream os;
      os << family_.label << ": ray left chart " << to_string(chart_) << " at t=" << t;
      throw Error(ErrorKind::OutOfChart, os.str());
    }
  }

  RaySample make_sample(const State& y, double t) const {
    RaySample s;
    s.t = t;
    s.position = seg3(y, 0);
    s.velocity = seg3(y, 3);
    s.e1 = seg3(y, 6);
    s.e2 = seg3(y, 9);
    s.J = mat2(y, 12);
    s.Jp = mat2(y, 16);
    const PointGeometry geo = geometry(y);
    Mat3 F;
    F.col(0) = s.velocity;
    F.col(1) = s.e1;
    F.col(2) = s.e2;
    // Symmetric re-orthonormalization so spectra do not inherit the frame drift.
    const Eigen::SelfAdjointEigenSolver<Mat3> gram(F.transpose() * geo.metric * F);
    F = F * gram.operatorInverseSqrt();
    const Tensor4 Rf = geo.riemann_lower.change_basis(F);
    const FrameCurvature fc = frame_curvature(Rf);
    s.ric_radial = fc.ricci(0, 0);
    s.scal = fc.ricci.trace();
    s.sec_tangent = fc.op(2, 2);
    s.jacobi_operator << Rf(1, 0, 0, 1), Rf(1, 0, 0, 2), Rf(2, 0, 0, 1), Rf(2, 0, 0, 2);
    s.ric_max = symmetric_eigenvalues(0.5 * (fc.ricci + fc.ricci.transpose()))[2];
    s.sec_max = symmetric_eigenvalues(0.5 * (fc.op + fc.op.transpose()))[2];
    return s;
  }

  double frame_drift(const State& y) const {
    const Mat3 g = homogeneous_ ? Mat3::Identity() : metric_at(family_, ChartPoint{seg3(y, 0), chart_}).g;
    Mat3 F;
    F.col(0) = seg3(y, 3);
    F.col(1) = seg3(y, 6);
    F.col(2) = seg3(y, 9);
    return (F.transpose() * g * F - Mat3::Identity()).cwiseAbs().maxCoeff();
  }

  double speed_drift(const State& y) const {
    const Vec3 v = seg3(y, 3);
    const Mat3 g = homogeneous_ ? Mat3::Identity() : metric_at(family_, ChartPoint{seg3(y, 0), chart_}).g;
    return std::abs(v.dot(g * v) - 1.0);
  }

  static State pack(const RaySample& s) {
    State y;
    y.segment<3>(0) = s.position;
    y.segment<3>(3) = s.velocity;
    y.segment<3>(6) = s.e1;
    y.segment<3>(9) = s.e2;
    put2(y, 12, s.J);
    put2(y, 16, s.Jp);
    return y;
  }

 private:
  const MetricFamily& family_;
  ChartId chart_;
  RayOptions opts_;
  bool homogeneous_;
  PointGeometry fixed_;
};

}  // namespace

void validate(const RayOptions& opts) {
  if (!(opts.step > 0.0)) throw Error(ErrorKind::Precondition, "ray step must be positive");
  if (!(opts.t0 > 0.0)) throw Error(ErrorKind::Precondition, "ray t0 must be positive");
  if (!(opts.t_max > 10.0 * opts.t0)) throw Error(ErrorKind::Precondition, "ray t_max must exceed t0 by far");
  if (!(opts.step_tolerance > 0.0)) throw Error(ErrorKind::Precondition, "step tolerance must be positive");
}

TangentVector direction_from_frame(const MetricFamily& family, const ChartPoint& p, const Vec3& unit) {
  const auto frame = orthonormal_frame_at(family, p);
  Vec3 c = Vec3::Zero();
  for (int i = 0; i < 3; ++i) c += unit[i] * frame[static_cast<std::size_t>(i)].components;
  return {p, c};
}

namespace {

// det J changes sign at a conjugate point of multiplicity one. At multiplicity
// two (J = 0 as a whole, e.g. antipodes of a round sphere) det J only touches
// zero, but J flips to roughly -J across the interval.
enum class Crossing { None, Determinant, Whole };

Crossing crossing_type(const RaySample& a, const RaySample& b) {
  if (b.lambda() <= 0.0) return Crossing::Determinant;
  if ((a.J.array() * b.J.array()).sum() <= 0.0) return Crossing::Whole;
  return Crossing::None;
}

// d/dt |J|^2 / 2
double norm_rate(const Mat2& J, const Mat2& Jp) { return (J.array() * Jp.array()).sum(); }

}  // namespace

RadialData integrate_radial(const MetricFamily& family, const ChartPoint& p, const TangentVector& direction,
                            const RayOptions& opts) {
  validate(opts);
  const Mat3 g = metric_matrix(family, p);
  const Vec3 v = direction.components;
  if (std::abs(v.dot(g * v) - 1.0) > 1e-12) throw Error(ErrorKind::Precondition, "ray direction is not unit");

  // Transverse frame: built in orthonormal coordinates, then mapped to components.
  const auto frame = orthonormal_frame_at(family, p);
  Mat3 F;
  for (int i = 0; i < 3; ++i) F.col(i) = frame[static_cast<std::size_t>(i)].components;
  const Vec3 d = F.transpose() * g * v;
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(d[i]) < std::abs(d[axis])) axis = i;
  Vec3 a = Vec3::Unit(axis) - d[axis] * d;
  a.normalize();
  const Vec3 b = d.cross(a);

  State y;
  y.segment<3>(0) = p.coords;
  y.segment<3>(3) = v;
  y.segment<3>(6) = F * a;
  y.segment<3>(9) = F * b;
  put2(y, 12, Mat2::Zero());
  put2(y, 16, Mat2::Identity());

  RadialData rd;
  rd.family = family;
  rd.base = p;
  rd.options = opts;
  rd.direction = direction;

  RayIntegrator integ(family, p, opts);
  int substeps = 0;
  // J(0) = 0, J'(0) = I is regular; only S needs t > 0.
  y = integ.advance(y, opts.t0, 0, substeps);
  integ.check_chart(y, opts.t0);

  int n = static_cast<int>(std::ceil((opts.t_max - opts.t0) / opts.step));
  n = std::max(n, 4);
  if (n % 2 == 1) ++n;
  const double h = (opts.t_max - opts.t0) / n;
  rd.step = h;
  rd.samples.reserve(static_cast<std::size_t>(n + 1));
  rd.samples.push_back(integ.make_sample(y, opts.t0));
  rd.max_speed_drift = integ.speed_drift(y);
  rd.max_frame_drift = integ.frame_drift(y);
  for (int k = 1; k <= n; ++k) {
    const double t = k == n ? opts.t_max : opts.t0 + k * h;
    y = integ.advance(y, h, 0, substeps);
    integ.check_chart(y, t);
    rd.samples.push_back(integ.make_sample(y, t));
    rd.max_speed_drift = std::max(rd.max_speed_drift, integ.speed_drift(y));
    rd.max_frame_drift = std::max(rd.max_frame_drift, integ.frame_drift(y));
  }
  rd.substeps = substeps;

  for (std::size_t k = 1; k < rd.samples.size(); ++k) {
    const RaySample &a = rd.samples[k - 1], &b = rd.samples[k];
    switch (crossing_type(a, b)) {
      case Crossing::None:
        continue;
      case Crossing::Determinant: {
        const double l0 = a.lambda(), l1 = b.lambda();
        rd.conjugate_t = (l0 > l1) ? a.t + (b.t - a.t) * l0 / (l0 - l1) : b.t;
        break;
      }
      case Crossing::Whole: {
        const double g0 = norm_rate(a.J, a.Jp), g1 = norm_rate(b.J, b.Jp);
        rd.conjugate_t = (g1 > g0) ? a.t + (b.t - a.t) * (-g0) / (g1 - g0) : b.t;
        break;
      }
    }
    break;
  }
  return rd;
}

RaySample sample_at(const RadialData& rd, double t) {
  if (rd.samples.empty()) throw Error(ErrorKind::Precondition, "empty ray");
  if (t < rd.samples.front().t || t > rd.samples.back().t + 1e-12)
    throw Error(ErrorKind::Precondition, "t outside ray grid");
  const double rel = (t - rd.samples.front().t) / rd.step;
  auto k = static_cast<std::size_t>(std::floor(rel));
  k = std::min(k, rd.samples.size() - 1);
  const RaySample& s = rd.samples[k];
  const double dt = t - s.t;
  if (dt == 0.0) return s;
  RayIntegrator integ(rd.family, rd.base, rd.options);
  int substeps = 0;
  const State y = integ.advance(RayIntegrator::pack(s), dt, 0, substeps);
  return integ.make_sample(y, t);
}

ShapeOperator shape_from_jacobi(const Mat2& J, const Mat2& Jp) {
  ShapeOperator s;
  s.matrix = Jp * J.inverse();
  s.trace = s.matrix.trace();
  s.norm_sq = s.matrix.squaredNorm();
  return s;
}

ShapeOperator shape_operator(const RadialData& rd, double t) {
  if (rd.conjugate_t && t >= *rd.conjugate_t)
    throw Error(ErrorKind::PastConjugate, "shape operator requested past the first conjugate point");
  if (!(t > rd.options.t0 * (1.0 - 1e-12) && t <= rd.samples.back().t + 1e-12))
    throw Error(ErrorKind::Precondition, "shape operator needs t0 <= t <= t_max");
  const RaySample s = sample_at(rd, t);
  return shape_from_jacobi(s.J, s.Jp);
}

double mean_curvature_small_t_check(const RadialData& rd, double t_small) {
  double worst = 0.0;
  for (const auto& s : rd.samples) {
    if (s.t > t_small) break;
    const double tr = shape_from_jacobi(s.J, s.Jp).trace;
    worst = std::max(worst, std::abs(tr - 2.0 / s.t) / s.t);
  }
  return worst;
}

std::optional<double> conjugate_point_scan(const RadialData& rd) {
  for (std::size_t k = 1; k < rd.samples.size(); ++k) {
    const Crossing type = crossing_type(rd.samples[k - 1], rd.samples[k]);
    if (type == Crossing::None) continue;
    double lo = rd.samples[k - 1].t, hi = rd.samples[k].t;
    RayIntegrator integ(rd.family, rd.base, rd.options);
    const State y0 = RayIntegrator::pack(rd.samples[k - 1]);
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      int substeps = 0;
      const State y = integ.advance(y0, mid - rd.samples[k - 1].t, 0, substeps);
      const bool before = type == Crossing::Determinant ? mat2(y, 12).determinant() > 0.0
                                                        : norm_rate(mat2(y, 12), mat2(y, 16)) < 0.0;
      if (before) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

double riccati_residual(const RadialData& rd, std::size_t index) {
  if (index < 2 || index + 2 >= rd.samples.size())
    throw Error(ErrorKind::BoundaryPoint, "Riccati residual needs two neighbours on each side");
  // Differencing S - I/t keeps the pole singularity out of the stencil.
  const auto smooth = [&](std::size_t i) {
    const RaySample& q = rd.samples[i];
    return (shape_from_jacobi(q.J, q.Jp).matrix - Mat2::Identity() / q.t).eval();
  };
  const double t = rd.samples[index].t;
  const Mat2 dS = (-smooth(index + 2) + 8.0 * smooth(index + 1) - 8.0 * smooth(index - 1) + smooth(index - 2)) /
                      (12.0 * rd.step) -
                  Mat2::Identity() / (t * t);
  const Mat2 s = shape_from_jacobi(rd.samples[index].J, rd.samples[index].Jp).matrix;
  return (dS + s * s + rd.samples[index].jacobi_operator).norm();
}

}  // namespace ricvol
