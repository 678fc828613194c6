#include "ricvol/ballvolume.hpp"

#include "ricvol/errors.hpp"
#include "ricvol/parallel.hpp"
#include "ricvol/quadrature.hpp"
#include "ricvol/sn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace ricvol {
namespace {

constexpr double kPi = std::numbers::pi;

// Per-ray integrands on the shared t grid, weighted by the area density.
struct RayIntegrands {
  std::vector<double> lambda, dlambda, ric, scal, hess, trs, gauss, ric_max, sec_max;
  std::optional<double> conjugate_t;
  int substeps = 0;
  double speed_drift = 0.0, frame_drift = 0.0;
};

RayIntegrands evaluate_ray(const MetricFamily& family, const ChartPoint& p, const Vec3& node,
                           const RayOptions& ray) {
  const RadialData rd = integrate_radial(family, p, direction_from_frame(family, p, node), ray);
  RayIntegrands out;
  const std::size_t n = rd.samples.size();
  for (auto* v : {&out.lambda, &out.dlambda, &out.ric, &out.scal, &out.hess, &out.trs, &out.gauss, &out.ric_max,
                  &out.sec_max})
    v->resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const RaySample& s = rd.samples[k];
    const double lam = s.lambda();
    const ShapeOperator S = shape_from_jacobi(s.J, s.Jp);
    out.lambda[k] = lam;
    // tr(J' J^-1) det J = tr(J' adj J)
    const Mat2 adj = (Mat2() << s.J(1, 1), -s.J(0, 1), -s.J(1, 0), s.J(0, 0)).finished();
    out.dlambda[k] = (s.Jp * adj).trace();
    out.ric[k] = s.ric_radial * lam;
    out.scal[k] = s.scal * lam;
    out.hess[k] = S.norm_sq * lam;
    out.trs[k] = S.trace * S.trace * lam;
    out.gauss[k] = 2.0 * (s.sec_tangent + S.matrix.determinant()) * lam;
    out.ric_max[k] = s.ric_max;
    out.sec_max[k] = s.sec_max;
  }
  out.conjugate_t = rd.conjugate_t;
  out.substeps = rd.substeps;
  out.speed_drift = rd.max_speed_drift;
  out.frame_drift = rd.max_frame_drift;
  return out;
}

BallProfile assemble(const MetricFamily& family, const ChartPoint& p, const BallOptions& opts,
                     const SphereQuadrature& quad) {
  validate(opts.ray);
  if (opts.ray.t_max > family.safe_radius * (1.0 + 1e-12) && !opts.allow_unsafe) {
    std::ostringstream os;
    os << family.label << ": t_max=" << opts.ray.t_max << " exceeds safe_radius=" << family.safe_radius;
    throw Error(ErrorKind::Precondition, os.str());
  }
  const std::size_t nodes = quad.nodes.size();
  std::vector<RayIntegrands> rays(nodes);
  parallel_for(nodes, [&](std::size_t i) { rays[i] = evaluate_ray(family, p, quad.nodes[i], opts.ray); });

  for (std::size_t i = 0; i < nodes; ++i) {
    if (rays[i].conjugate_t && *rays[i].conjugate_t <= opts.ray.t_max) {
      std::ostringstream os;
      os.precision(17);
      const Vec3& d = quad.nodes[i];
      os << family.label << ": conjugate point at t=" << *rays[i].conjugate_t << " in direction (" << d[0] << ","
         << d[1] << "," << d[2] << ")";
      throw Error(ErrorKind::ConjugateInsideRange, os.str());
    }
  }

  BallProfile prof;
  prof.family_label = family.label;
  const std::size_t n = rays.front().lambda.size();
  const auto grid_n = static_cast<double>(n - 1);
  const double h = (opts.ray.t_max - opts.ray.t0) / grid_n;
  prof.meta.level = quad.level;
  prof.meta.directions = static_cast<int>(nodes);
  prof.meta.step = h;
  prof.meta.t0 = opts.ray.t0;
  prof.meta.t_max = opts.ray.t_max;
  if (family.kind == FamilyKind::RotSymmetric && family.profile && p.coords.norm() == 0.0)
    prof.nonsmooth_t = family.profile->breakpoints();
  prof.meta.unsafe_override = opts.ray.t_max > family.safe_radius * (1.0 + 1e-12);
  prof.t.resize(n);
  for (std::size_t k = 0; k < n; ++k) prof.t[k] = k + 1 == n ? opts.ray.t_max : opts.ray.t0 + static_cast<double>(k) * h;

  for (auto* v : {&prof.A, &prof.Aprime, &prof.ric_radial_int, &prof.scal_int, &prof.hess_sq_int,
                  &prof.trS_sq_int, &prof.gauss_int})
    v->assign(n, 0.0);
  prof.ric_max.assign(n, -std::numeric_limits<double>::infinity());
  prof.sec_max.assign(n, -std::numeric_limits<double>::infinity());
  // Fixed node order keeps the reduction bit-reproducible.
  for (std::size_t i = 0; i < nodes; ++i) {
    const double w = quad.weights[i];
    const RayIntegrands& r = rays[i];
    for (std::size_t k = 0; k < n; ++k) {
      prof.A[k] += w * r.lambda[k];
      prof.Aprime[k] += w * r.dlambda[k];
      prof.ric_radial_int[k] += w * r.ric[k];
      prof.scal_int[k] += w * r.scal[k];
      prof.hess_sq_int[k] += w * r.hess[k];
      prof.trS_sq_int[k] += w * r.trs[k];
      prof.gauss_int[k] += w * r.gauss[k];
      prof.ric_max[k] = std::max(prof.ric_max[k], r.ric_max[k]);
      prof.sec_max[k] = std::max(prof.sec_max[k], r.sec_max[k]);
    }
    prof.meta.substeps += r.substeps;
    prof.meta.max_speed_drift = std::max(prof.meta.max_speed_drift, r.speed_drift);
    prof.meta.max_frame_drift = std::max(prof.meta.max_frame_drift, r.frame_drift);
  }

  // [0, t0] sliver: flat ball.
  const double t0 = opts.ray.t0;
  const std::vector<double> cum = cumulative_piecewise(prof.t, prof.A, prof.nonsmooth_t);
  prof.V.resize(n);
  for (std::size_t k = 0; k < n; ++k) prof.V[k] = 4.0 / 3.0 * kPi * t0 * t0 * t0 + cum[k];
  return prof;
}

}  // namespace

SphereQuadrature sphere_quadrature(int level) {
  if (level < 1) throw Error(ErrorKind::Precondition, "quadrature level must be >= 1");
  SphereQuadrature q;
  q.level = level;
  q.polar_nodes = 8 * level;
  q.azimuth_nodes = 2 * q.polar_nodes;
  const Rule1D gl = gauss_legendre(q.polar_nodes);
  const double dphi = 2.0 * kPi / q.azimuth_nodes;
  for (int i = 0; i < q.polar_nodes; ++i) {
    const double z = gl.nodes[static_cast<std::size_t>(i)];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < q.azimuth_nodes; ++j) {
      const double phi = (j + 0.5) * dphi;
      q.nodes.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
      q.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * dphi);
    }
  }
  return q;
}

BallProfile ball_functions(const MetricFamily& family, const ChartPoint& p, const BallOptions& opts,
                           const SphereQuadrature& quad) {
  BallProfile prof = assemble(family, p, opts, quad);
  if (opts.resolution_tolerance) {
    const BallProfile fine = assemble(family, p, opts, sphere_quadrature(2 * quad.level));
    const double rel = std::abs(fine.A.back() - prof.A.back()) / std::abs(fine.A.back());
    if (rel > *opts.resolution_tolerance) {
      std::ostringstream os;
      os << family.label << ": A(t_max) changes by " << rel << " relative when the level doubles";
      throw Error(ErrorKind::QuadratureUnderResolved, os.str());
    }
  }
  return prof;
}

bool BallProfile::smooth_window(std::size_t k, std::size_t half) const {
  const double lo = t[k >= half ? k - half : 0];
  const double hi = t[std::min(k + half, t.size() - 1)];
  return std::none_of(nonsmooth_t.begin(), nonsmooth_t.end(), [&](double b) { return b > lo && b < hi; });
}

double BallProfile::certified_ric_max(double t_limit) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size() && t[k] <= t_limit * (1.0 + 1e-12); ++k) m = std::max(m, ric_max[k]);
  return m;
}

double BallProfile::certified_sec_max(double t_limit) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size() && t[k] <= t_limit * (1.0 + 1e-12); ++k) m = std::max(m, sec_max[k]);
  return m;
}

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) {
    for (std::size_t k = 1; k < n; ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return out;
  }
  // Even prefixes: composite Simpson.
  for (std::size_t k = 2; k < n; k += 2) out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  // First interval: integral of the interpolating quartic (lower degree for short grids).
  if (n >= 5)
    out[1] = h / 720.0 * (251.0 * f[0] + 646.0 * f[1] - 264.0 * f[2] + 106.0 * f[3] - 19.0 * f[4]);
  else if (n >= 4)
    out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  else
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (std::size_t k = 3; k < n; k += 2)
    out[k] = out[k - 3] + 3.0 * h / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
  return out;
}

namespace {

// Integral over [a, b] of the cubic through (x[i], y[i]), i = 0..3; 2-point Gauss is exact.
double cubic_integral(const double* x, const double* y, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a) / std::sqrt(3.0);
  double sum = 0.0;
  for (double u : {c - r, c + r}) {
    for (int i = 0; i < 4; ++i) {
      double l = y[i];
      for (int j = 0; j < 4; ++j)
        if (j != i) l *= (u - x[j]) / (x[i] - x[j]);
      sum += l;
    }
  }
  return 0.5 * (b - a) * sum;
}

}  // namespace

std::vector<double> cumulative_piecewise(const std::vector<double>& t, const std::vector<double>& f,
                                         const std::vector<double>& breaks) {
  const std::size_t n = t.size();
  if (n < 2) return std::vector<double>(n, 0.0);
  const double h = t[1] - t[0];
  // Pieces [lo, hi). A break on a grid point is shared by both pieces; a break
  // inside (t[k-1], t[k]) starts the next piece at k and splits that interval.
  struct Piece {
    std::size_t lo, hi;
    std::optional<double> cut;
  };
  std::vector<Piece> pieces{{0, n, std::nullopt}};
  for (double b : breaks) {
    if (!(b > t.front() && b < t.back())) continue;
    const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), b) - t.begin());
    Piece& last = pieces.back();
    if (std::abs(t[k - 1] - b) <= 1e-9 * h) {
      if (k - 1 <= last.lo) continue;
      last.hi = k;
      pieces.push_back({k - 1, n, std::nullopt});
    } else if (std::abs(t[k] - b) <= 1e-9 * h) {
      last.hi = k + 1;
      pieces.push_back({k, n, std::nullopt});
    } else {
      last.hi = k;
      pieces.push_back({k, n, b});
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const Piece& pc = pieces[p];
    double base = 0.0;
    if (p > 0) {
      const Piece& prev = pieces[p - 1];
      if (pc.cut) {
        if (prev.hi - prev.lo < 4 || pc.hi - pc.lo < 4)
          throw Error(ErrorKind::Precondition, "smooth pieces need at least four grid points");
        base = out[pc.lo - 1] + cubic_integral(&t[pc.lo - 4], &f[pc.lo - 4], t[pc.lo - 1], *pc.cut) +
               cubic_integral(&t[pc.lo], &f[pc.lo], *pc.cut, t[pc.lo]);
      } else {
        base = out[pc.lo];
      }
    }
    const std::vector<double> piece(f.begin() + static_cast<long>(pc.lo), f.begin() + static_cast<long>(pc.hi));
    const std::vector<double> c = cumulative_simpson(piece, h);
    for (std::size_t k = pc.lo; k < pc.hi; ++k) out[k] = base + c[k - pc.lo];
  }
  return out;
}

DerivativeEstimate second_derivative_A_at(const BallProfile& profile, std::size_t k) {
  const auto& f = profile.Aprime;
  const std::size_t n = f.size();
  if (k < 2 || k + 2 >= n) throw Error(ErrorKind::BoundaryPoint, "A'' needs two grid neighbours on each side");
  const double h = profile.step();
  DerivativeEstimate d;
  d.value = (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / (12.0 * h);
  // Truncation: compare with the doubled-step stencil (or the 2nd-order one at the edges).
  double coarse;
  if (k >= 4 && k + 4 < n)
    coarse = (-f[k + 4] + 8.0 * f[k + 2] - 8.0 * f[k - 2] + f[k - 4]) / (24.0 * h);
  else
    coarse = (f[k + 1] - f[k - 1]) / (2.0 * h);
  const double local = std::max({std::abs(f[k - 2]), std::abs(f[k - 1]), std::abs(f[k + 1]), std::abs(f[k + 2])});
  // Roundoff and ray-integration noise in A' amplified by the stencil (sum |c_i| = 18/12).
  constexpr double kNoise = 1e-10;
  d.error_estimate = std::abs(d.value - coarse) + 1.5 * kNoise * local / h;
  return d;
}

ProfilePoint profile_at(const BallProfile& p, double t) {
  if (p.size() < 2 || !(t >= p.t.front() && t <= p.t.back()))
    throw Error(ErrorKind::Precondition, "profile_at: t outside the profile grid");
  const auto hi = std::upper_bound(p.t.begin(), p.t.end(), t);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(hi - p.t.begin()), p.size() - 1) - 1;
  const double h = p.t[k + 1] - p.t[k];
  const double s = (t - p.t[k]) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  const double a0 = p.A[k], a1 = p.A[k + 1], d0 = h * p.Aprime[k], d1 = h * p.Aprime[k + 1];
  ProfilePoint out;
  out.A = (2 * s3 - 3 * s2 + 1) * a0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * a1 + (s3 - s2) * d1;
  out.V = p.V[k] + h * ((s4 / 2 - s3 + s) * a0 + (s4 / 4 - 2 * s3 / 3 + s2 / 2) * d0 + (-s4 / 2 + s3) * a1 +
                        (s4 / 4 - s3 / 3) * d1);
  return out;
}

DerivativeEstimate second_derivative_A(const BallProfile& profile, double t) {
  const double h = profile.step();
  const double rel = (t - profile.t.front()) / h;
  const double k = std::round(rel);
  if (std::abs(rel - k) > 1e-6 || k < 0.0)
    throw Error(ErrorKind::Precondition, "second_derivative_A expects a grid point");
  return second_derivative_A_at(profile, static_cast<std::size_t>(k));
}

// ---------------------------------------------------------------- model space

double ModelSpace::sn(double t) const { return ricvol::sn(kappa_, t); }
double ModelSpace::sn_prime(double t) const { return ricvol::sn_prime(kappa_, t); }

double ModelSpace::area(double t) const {
  const double s = sn(t);
  return 4.0 * kPi * s * s;
}

double ModelSpace::area_prime(double t) const { return 8.0 * kPi * sn(t) * sn_prime(t); }

double ModelSpace::volume(double t) const {
  const double k = kappa_;
  if (k == 0.0) return 4.0 / 3.0 * kPi * t * t * t;
  const double u = k * t * t;
  if (std::abs(u) <= 1.0) {
    // 4 pi int_0^t s^2 h(k s^2) ds = 4 pi sum c_n k^n t^(2n+3) / (2n+3)
    double sum = 0.0, un = 1.0;
    for (int n = 0; n < 24; ++n) {
      sum += squared_sinc_coefficient(n) * un / (2.0 * n + 3.0);
      un *= u;
    }
    return 4.0 * kPi * t * t * t * sum;
  }
  if (k > 0.0) {
    const double q = std::sqrt(k);
    return 2.0 * kPi / k * (t - std::sin(2.0 * q * t) / (2.0 * q));
  }
  const double q = std::sqrt(-k);
  return 2.0 * kPi / (-k) * (std::sinh(2.0 * q * t) / (2.0 * q) - t);
}

ModelSpace model_space(double kappa) { return ModelSpace(kappa); }

}  // namespace ricvol
