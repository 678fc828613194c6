#include "ricvol/curvature.hpp"

#include "ricvol/errors.hpp"
#include "ricvol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ricvol {

std::array<Christoffel, 3> christoffel_derivative(const MetricValue& m, const Mat3& ginv) {
  std::array<Christoffel, 3> dgamma{};
  // T_ijl = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  Tensor4 dT;  // dT(mm, i, j, l) = d_mm T_ijl
  std::array<std::array<Vec3, 3>, 3> T{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        T[i][j][l] = 0.5 * (m.dg[i](j, l) + m.dg[j](i, l) - m.dg[l](i, j));
        for (int mm = 0; mm < 3; ++mm)
          dT(mm, i, j, l) = 0.5 * (m.d2g[mm][i](j, l) + m.d2g[mm][j](i, l) - m.d2g[mm][l](i, j));
      }
  for (int mm = 0; mm < 3; ++mm) {
    const Mat3 dginv = -ginv * m.dg[mm] * ginv;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Vec3 dTl;
        for (int l = 0; l < 3; ++l) dTl[l] = dT(mm, i, j, l);
        const Vec3 val = dginv * T[i][j] + ginv * dTl;
        for (int k = 0; k < 3; ++k) dgamma[mm][k](i, j) = val[k];
      }
  }
  return dgamma;
}

PointGeometry geometry_at(const MetricFamily& family, const ChartPoint& p) {
  PointGeometry geo;
  if (p.chart == ChartId::Group) {
    if (!family.homogeneous) throw Error(ErrorKind::OutOfChart, family.label + ": no homogeneous frame");
    geo.metric = Mat3::Identity();
    geo.christoffel = family.homogeneous->connection;
    geo.riemann_lower = family.homogeneous->riemann;
    geo.riemann_mixed = family.homogeneous->riemann;
    return geo;
  }
  const MetricValue m = metric_at(family, p);
  Mat3 ginv;
  geo.metric = m.g;
  geo.christoffel = christoffel_from_metric(m, &ginv);
  const auto dG = christoffel_derivative(m, ginv);
  const auto& G = geo.christoffel;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = dG[i][l](j, k) - dG[j][l](i, k);
          for (int q = 0; q < 3; ++q) s += G[l](i, q) * G[q](j, k) - G[l](j, q) * G[q](i, k);
          geo.riemann_mixed(i, j, k, l) = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int q = 0; q < 3; ++q) s += m.g(l, q) * geo.riemann_mixed(i, j, k, q);
          geo.riemann_lower(i, j, k, l) = s;
        }
  return geo;
}

FrameCurvature frame_curvature(const Tensor4& r) {
  FrameCurvature fc;
  for (int A = 0; A < 3; ++A)
    for (int B = 0; B < 3; ++B) {
      const auto [a, b] = kBivectorBasis[static_cast<std::size_t>(A)];
      const auto [c, d] = kBivectorBasis[static_cast<std::size_t>(B)];
      fc.op(A, B) = r(a, b, d, c);
    }
  // Ric(v,w) = sum_i <R(e_i,w)v, e_i>
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += r(i, b, a, i);
      fc.ricci(a, b) = s;
    }
  return fc;
}

CurvatureAtPoint riemann_at(const MetricFamily& family, const ChartPoint& p) {
  const PointGeometry geo = geometry_at(family, p);
  CurvatureAtPoint out;
  out.riemann = geo.riemann_mixed;
  out.riemann_0_4 = geo.riemann_lower;
  const auto frame = orthonormal_frame_at(family, p);
  for (int i = 0; i < 3; ++i) out.frame.col(i) = frame[static_cast<std::size_t>(i)].components;
  const FrameCurvature fc = frame_curvature(geo.riemann_lower.change_basis(out.frame));
  out.op_matrix = fc.op;
  out.op_eigenvalues = symmetric_eigenvalues(0.5 * (fc.op + fc.op.transpose()));
  out.ricci = fc.ricci;
  out.ricci_eigenvalues = symmetric_eigenvalues(0.5 * (fc.ricci + fc.ricci.transpose()));
  out.scalar = fc.ricci.trace();
  return out;
}

OperatorSpectrum curvature_operator_at(const MetricFamily& family, const ChartPoint& p) {
  const CurvatureAtPoint c = riemann_at(family, p);
  return {c.op_matrix, c.op_eigenvalues};
}

double sectional_at(const MetricFamily& family, const ChartPoint& p, const TangentVector& v,
                    const TangentVector& w) {
  const PointGeometry geo = geometry_at(family, p);
  const Mat3& g = geo.metric;
  const Vec3& a = v.components;
  const Vec3& b = w.components;
  const double vv = a.dot(g * a), ww = b.dot(g * b), vw = a.dot(g * b);
  const double gram = vv * ww - vw * vw;
  if (!(gram > 1e-14 * vv * ww)) throw Error(ErrorKind::DegeneratePlane, "vectors span no 2-plane");
  return geo.riemann_lower.evaluate(b, a, a, b) / gram;
}

RicciAtPoint ricci_at(const MetricFamily& family, const ChartPoint& p) {
  const CurvatureAtPoint c = riemann_at(family, p);
  return {c.ricci, c.ricci_eigenvalues, c.scalar};
}

KPlusValue k_plus_at(const MetricFamily& family, const ChartPoint& p) {
  const RicciAtPoint r = ricci_at(family, p);
  return {std::max(0.0, r.eigenvalues[2])};
}

KPlusTotal total_k_plus(const MetricFamily& family, double r_max) {
  if (family.kind != FamilyKind::RotSymmetric || !family.profile)
    throw Error(ErrorKind::Precondition, "total_k_plus needs a rotationally symmetric family");
  if (!(r_max > 0.0)) throw Error(ErrorKind::Precondition, "total_k_plus needs r_max > 0");
  const RotProfile& prof = *family.profile;
  const double end = prof.domain_end();
  const double upper = std::min(r_max, end);

  // Cartesian chart: regular at the pole, unlike the polar one.
  const auto point = [&](double r) { return ChartPoint{Vec3(r, 0.0, 0.0), family.ray_chart}; };
  const auto k_plus_r = [&](double r) { return k_plus_at(family, point(r)).value; };
  if (prof.unbounded_tail() && upper >= r_max && k_plus_r(r_max) > 1e-12)
    throw Error(ErrorKind::DivergentIntegral, "K+ does not vanish at r_max on an unbounded tail");

  const auto integrand = [&](double r) {
    const double f = prof.eval(r).f;
    return k_plus_r(r) * 4.0 * std::numbers::pi * f * f;
  };

  // Panel boundaries: profile joins plus sign changes of the top Ricci eigenvalue,
  // so each panel integrand is smooth.
  std::vector<double> cuts{0.0};
  for (double b : prof.breakpoints())
    if (b > 0.0 && b < upper) cuts.push_back(b);
  cuts.push_back(upper);
  std::vector<double> edges;
  const auto top_ricci = [&](double r) {
    return ricci_at(family, point(r)).eigenvalues[2];
  };
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    edges.push_back(a);
    constexpr int kScan = 64;
    const double lo_eps = (a == 0.0) ? 1e-6 : 0.0;
    double prev_r = a + lo_eps + (b - a - lo_eps) * 1e-9;
    double prev = top_ricci(prev_r);
    for (int i = 1; i <= kScan; ++i) {
      double r = a + lo_eps + (b - a - lo_eps) * i / kScan;
      if (i == kScan) r = b - (b - a) * 1e-9;
      const double val = top_ricci(r);
      if ((prev > 0.0) != (val > 0.0)) {
        double lo = prev_r, hi = r;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((top_ricci(mid) > 0.0) == (prev > 0.0)) lo = mid; else hi = mid;
        }
        edges.push_back(0.5 * (lo + hi));
      }
      prev = val;
      prev_r = r;
    }
  }
  edges.push_back(upper);

  KPlusTotal out;
  out.r_upper = upper;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s], b = edges[s + 1];
    if (!(b > a)) continue;
    const IntegralEstimate e = adaptive_gauss_kronrod(integrand, a, b, 1e-11 * (b - a));
    out.value += e.value;
    out.error_estimate += e.error;
    out.alternative += composite_gauss_legendre(integrand, a, b, 64, 10);
  }
  const double scale = std::max(std::abs(out.value), 1e-300);
  out.relative_agreement = (out.value == 0.0 && out.alternative == 0.0)
                               ? 0.0
                               : std::abs(out.value - out.alternative) / scale;
  return out;
}

double antisymmetry_residual(const Tensor4& r) {
  double res = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          res = std::max({res, std::abs(r(i, j, k, l) + r(j, i, k, l)), std::abs(r(i, j, k, l) + r(i, j, l, k))});
  return res;
}

double pair_symmetry_residual(const Tensor4& r) {
  double res = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) res = std::max(res, std::abs(r(i, j, k, l) - r(k, l, i, j)));
  return res;
}

double first_bianchi_residual(const Tensor4& r) {
  double res = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          res = std::max(res, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return res;
}

}  // namespace ricvol
