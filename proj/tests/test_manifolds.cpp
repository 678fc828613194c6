#include "ricvol/errors.hpp"
#include "ricvol/manifolds.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace ricvol;

namespace {

struct Sample {
  MetricFamily family;
  ChartPoint point;
};

std::vector<Sample> chart_samples() {
  std::vector<Sample> out;
  for (double k : {-1.0, 0.0, 1.0, 2.0}) {
    const MetricFamily f = make_space_form(k);
    out.push_back({f, {Vec3(0.2, -0.1, 0.3), ChartId::Conformal}});
    out.push_back({f, {Vec3(0.5, 0.4, -0.2), ChartId::Conformal}});
  }
  for (double a : {1.5, 2.0, 3.0}) out.push_back({make_doubly_warped(a), {Vec3(0.3, 1.0, 2.0), ChartId::Warped}});
  for (double k : {0.5, 1.0, 2.0})
    out.push_back({make_product_s2r(k), {Vec3(0.3, -0.2, 0.5), ChartId::StereoLine}});
  const MetricFamily cap = make_cap_metric(1.0, 0.2);
  for (const Vec3& x : {Vec3(0.3, 0.2, 0.1), Vec3(0.6, 0.7, 0.2), Vec3(0.8, 0.6, 0.3), Vec3(1.5, 0.4, 0.3)})
    out.push_back({cap, {x, ChartId::Cartesian}});
  out.push_back({cap, {Vec3(0.7, 1.1, 0.4), ChartId::Polar}});
  out.push_back({make_rot_symmetric(RotProfile::sn(-1.0)), {Vec3(0.4, -0.3, 0.2), ChartId::Cartesian}});
  return out;
}

Mat3 shifted_metric(const Sample& s, int k, double h) {
  ChartPoint q = s.point;
  q.coords[k] += h;
  return metric_at(s.family, q).g;
}

// Christoffel symbols from a central-difference metric gradient.
Christoffel fd_christoffel(const Sample& s, double h) {
  std::array<Mat3, 3> dg;
  for (int k = 0; k < 3; ++k) dg[k] = (shifted_metric(s, k, h) - shifted_metric(s, k, -h)) / (2 * h);
  const Mat3 ginv = metric_at(s.family, s.point).g.inverse();
  Christoffel gamma;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        for (int l = 0; l < 3; ++l) v += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = v;
      }
  return gamma;
}

}  // namespace

TEST_SUITE("manifolds") {

TEST_CASE("parameter constraints") {
  CHECK_THROWS_WITH_AS(make_doubly_warped(0.5), doctest::Contains("a > 1"), Error);
  CHECK_THROWS_WITH_AS(make_berger_sphere(1.0), doctest::Contains("epsilon < 1"), Error);
  CHECK_THROWS_AS(make_berger_sphere(0.0), Error);
  CHECK_THROWS_AS(make_product_s2r(-1.0), Error);
  CHECK_THROWS_AS(make_space_form(NAN), Error);
  CHECK_THROWS_AS(make_cap_metric(2.0, 0.2), Error);
  CHECK_THROWS_AS(make_cap_metric(1.0, 0.0), Error);
  try {
    make_doubly_warped(1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstraintError);
  }
}

TEST_CASE("closed-form metric components") {
  const double a = 2.0, r = 0.3;
  const MetricFamily dw = make_doubly_warped(a);
  const Mat3 g = metric_at(dw, {Vec3(r, 1.0, 2.0), ChartId::Warped}).g;
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(std::exp(-2 * (1 + a) * r)).epsilon(1e-14));
  CHECK(g(2, 2) == doctest::Approx(std::exp(-2 * (1 - a) * r)).epsilon(1e-14));
  CHECK(std::abs(g(0, 1)) + std::abs(g(0, 2)) + std::abs(g(1, 2)) == 0.0);

  const Vec3 x(0.2, -0.1, 0.3);
  for (double k : {-1.0, 1.0}) {
    const Mat3 gc = metric_at(make_space_form(k), {x, ChartId::Conformal}).g;
    const double c = 1.0 / std::pow(1 + k * x.squaredNorm() / 4, 2);
    CHECK((gc - c * Mat3::Identity()).norm() <= 1e-15);
  }
}

TEST_CASE("metric derivatives against finite differences") {
  const double h = 1e-5;
  for (const Sample& s : chart_samples()) {
    CAPTURE(s.family.label);
    const MetricValue m = metric_at(s.family, s.point);
    for (int k = 0; k < 3; ++k) {
      const Mat3 fd = (shifted_metric(s, k, h) - shifted_metric(s, k, -h)) / (2 * h);
      CHECK((fd - m.dg[k]).cwiseAbs().maxCoeff() <= 1e-8);
      ChartPoint qp = s.point, qm = s.point;
      qp.coords[k] += h;
      qm.coords[k] -= h;
      const MetricValue mp = metric_at(s.family, qp), mm = metric_at(s.family, qm);
      for (int l = 0; l < 3; ++l) CHECK(((mp.dg[l] - mm.dg[l]) / (2 * h) - m.d2g[k][l]).cwiseAbs().maxCoeff() <= 1e-7);
    }
  }
}

TEST_CASE("Christoffel symbols against a finite-difference oracle") {
  for (const Sample& s : chart_samples()) {
    CAPTURE(s.family.label);
    const Christoffel fd = fd_christoffel(s, 1e-5);
    const Christoffel c = christoffel_at(s.family, s.point);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, (fd[k] - c[k]).cwiseAbs().maxCoeff());
      CHECK((c[k] - c[k].transpose()).norm() <= 1e-14);
    }
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("orthonormal frames") {
  for (const Sample& s : chart_samples()) {
    const auto frame = orthonormal_frame_at(s.family, s.point);
    const Mat3 g = metric_at(s.family, s.point).g;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK(std::abs(frame[a].components.dot(g * frame[b].components) - (a == b ? 1.0 : 0.0)) <= 1e-13);
  }
}

TEST_CASE("homogeneous structure of the group metrics") {
  for (double e : {0.25, 0.5, 0.9}) {
    const MetricFamily f = make_berger_sphere(e);
    REQUIRE(f.homogeneous);
    CHECK(f.homogeneous->antisymmetry_residual() <= 1e-14);
    CHECK(f.homogeneous->jacobi_residual() <= 1e-14);
    CHECK(f.base_point().chart == ChartId::Group);
    CHECK(in_chart(f, f.base_point()));
  }
  // su(2) basis of the Berger example: [X1, X2] = 2 X3 and cyclic.
  const auto X = su2_basis();
  CHECK((X[0] * X[1] - X[1] * X[0] - 2.0 * X[2]).norm() <= 1e-15);
  CHECK((X[1] * X[2] - X[2] * X[1] - 2.0 * X[0]).norm() <= 1e-15);
  CHECK((X[2] * X[0] - X[0] * X[2] - 2.0 * X[1]).norm() <= 1e-15);
}

TEST_CASE("cap profile") {
  const RotProfile p = RotProfile::cap(1.0, 0.2);
  for (double r : {0.1, 0.5, 0.99}) {
    CHECK(p.eval(r).f == doctest::Approx(std::sin(r)).epsilon(1e-15));
    CHECK(p.eval(r).d2f == doctest::Approx(-std::sin(r)).epsilon(1e-14));
  }
  CHECK(p.join_residual() <= 1e-12);
  const ProfileJet tail = p.eval(2.0);
  CHECK(tail.d2f == 0.0);
  CHECK(tail.df == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.unbounded_tail());
  CHECK(p.breakpoints().size() == 2);
  CHECK(std::isinf(p.domain_end()));
  // f > 0 and monotone across the blend
  double prev = 0.0;
  for (double r = 0.01; r < 3.0; r += 0.01) {
    const double f = p.eval(r).f;
    CHECK(f > prev);
    prev = f;
  }
  CHECK(RotProfile::sn(1.0).domain_end() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("chart membership") {
  const MetricFamily h = make_space_form(-1.0);
  CHECK(in_chart(h, {Vec3(1.0, 0.5, 0.0), ChartId::Conformal}));
  CHECK_FALSE(in_chart(h, {Vec3(2.5, 0.0, 0.0), ChartId::Conformal}));
  CHECK_FALSE(in_chart(make_doubly_warped(2.0), {Vec3::Zero(), ChartId::Conformal}));
  CHECK_FALSE(in_chart(h, {Vec3(NAN, 0.0, 0.0), ChartId::Conformal}));
  CHECK_THROWS_AS(metric_at(h, {Vec3(2.5, 0.0, 0.0), ChartId::Conformal}), Error);
}

}  // TEST_SUITE
