#include "ricvol/ballvolume.hpp"
#include "ricvol/errors.hpp"
#include "ricvol/quadrature.hpp"
#include "ricvol/sn.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ricvol;

namespace {

constexpr double kPi = std::numbers::pi;

BallProfile profile(const MetricFamily& f, double t_max, int level = 2, double step = 0.005) {
  BallOptions o;
  o.ray.t_max = t_max;
  o.ray.step = step;
  return ball_functions(f, f.base_point(), o, sphere_quadrature(level));
}

// Independent 1D oracle: 32-point Gauss-Legendre on 64 panels.
template <class F>
double integrate(F f, double a, double b) {
  static const Rule1D r = gauss_legendre(32);
  const int panels = 64;
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      s += 0.5 * h * r.weights[i] * f(a + h * (p + 0.5 + 0.5 * r.nodes[i]));
  return s;
}

}  // namespace

TEST_SUITE("ballvolume") {

TEST_CASE("model-space closed forms") {
  CHECK(model_space(0).volume(1.0) == doctest::Approx(4 * kPi / 3).epsilon(1e-15));
  CHECK(std::abs(model_space(1).volume(kPi / 2) - kPi * kPi) <= 1e-13);
  CHECK(std::abs(model_space(1).volume(kPi / 2) - integrate([](double s) { return 4 * kPi * std::sin(s) * std::sin(s); },
                                                            0.0, kPi / 2)) <= 1e-12);
  for (double k : {-2.0, -1.0, -0.01, 0.0, 0.01, 1.0, 2.0}) {
    const ModelSpace m(k);
    for (double t : {0.05, 0.3, 0.7, 0.99, 1.01, 1.2}) {
      const double oracle = integrate([&](double s) { return m.area(s); }, 0.0, t);
      CHECK(m.volume(t) == doctest::Approx(oracle).epsilon(1e-13));
      CHECK(m.area(t) == doctest::Approx(4 * kPi * m.sn(t) * m.sn(t)).epsilon(1e-15));
    }
  }
  for (double k : {-1.0, 0.0, 1.0})
    for (double t : {0.3, 0.7, 1.2}) {
      const ModelSpace m(k);
      CHECK(std::abs(4 * k * m.volume(t) + m.area_prime(t) - 8 * kPi * t) <= 1e-10);
    }
  // series / closed-form switch at |k t^2| = 1
  const ModelSpace m(1.0);
  CHECK(m.volume(1.0 - 1e-12) == doctest::Approx(m.volume(1.0 + 1e-12)).epsilon(1e-11));
}

TEST_CASE("cumulative Simpson and piecewise integration") {
  const double h = 0.1;
  for (int n : {2, 3, 4, 5, 9, 10}) {
    std::vector<double> f, t;
    for (int i = 0; i < n; ++i) {
      t.push_back(i * h);
      f.push_back(std::pow(i * h, 3) - 2 * i * h + 1);
    }
    const std::vector<double> c = cumulative_simpson(f, h);
    for (int i = 0; i < n; ++i) {
      const double x = i * h;
      const double exact = std::pow(x, 4) / 4 - x * x + x;
      if (n >= 4 || i % 2 == 0) CHECK(c[i] == doctest::Approx(exact).epsilon(1e-13).scale(1e-13));
    }
  }
  // kink at 0.45: f = |x - 0.45|^3 + x; exact integral 0.45^4/4 + 0.55^4/4 + 1/2 at x = 1
  std::vector<double> t, f;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(i * 0.05);
    f.push_back(std::pow(std::abs(t.back() - 0.45), 3) + t.back());
  }
  const std::vector<double> c = cumulative_piecewise(t, f, {0.45});
  CHECK(c.back() == doctest::Approx(std::pow(0.45, 4) / 4 + std::pow(0.55, 4) / 4 + 0.5).epsilon(1e-13));
}

TEST_CASE("flat space reproduces 4 pi t^2 and 4/3 pi t^3") {
  const BallProfile p = profile(make_space_form(0), 1.0, 1);
  CHECK(p.t.back() == 1.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double t = p.t[k];
    CHECK(std::abs(p.A[k] / (4 * kPi * t * t) - 1) <= 1e-8);
    CHECK(std::abs(p.Aprime[k] / (8 * kPi * t) - 1) <= 1e-8);
    CHECK(std::abs(p.ric_radial_int[k]) <= 1e-12);
    CHECK(std::abs(p.hess_sq_int[k] - 8 * kPi) <= 1e-6);
    CHECK(std::abs(p.trS_sq_int[k] - 16 * kPi) <= 1e-6);
  }
  CHECK(std::abs(p.V.back() / (4 * kPi / 3) - 1) <= 1e-8);
  const DerivativeEstimate d = second_derivative_A(p, p.t[p.size() / 2]);
  CHECK(std::abs(d.value - 8 * kPi) <= 1e-6);
}

TEST_CASE("round sphere: V(1), A'' and interpolation") {
  const BallProfile p = profile(make_space_form(1), 1.0);
  const double v1 = 2 * kPi * (1 - std::sin(2.0) / 2);
  CHECK(std::abs(p.V.back() / v1 - 1) <= 1e-7);
  for (double t : {0.25, 0.5, 0.777}) {
    const ProfilePoint q = profile_at(p, t);
    CHECK(std::abs(q.A / (4 * kPi * std::pow(std::sin(t), 2)) - 1) <= 1e-8);
    CHECK(std::abs(q.V / (2 * kPi * (t - std::sin(2 * t) / 2)) - 1) <= 1e-7);
  }
  CHECK_THROWS_AS(profile_at(p, 1.5), Error);
  // A'' = 8 pi cos 2t at the grid point nearest 0.5
  std::size_t k = 0;
  while (p.t[k] < 0.5) ++k;
  const DerivativeEstimate d = second_derivative_A_at(p, k);
  CHECK(std::abs(d.value - 8 * kPi * std::cos(2 * p.t[k])) <= 1e-5);
  CHECK_THROWS_AS(second_derivative_A_at(p, 1), Error);
  CHECK_THROWS_AS(second_derivative_A_at(p, p.size() - 1), Error);
  CHECK_THROWS_AS(second_derivative_A(p, 0.5011), Error);
}

TEST_CASE("A'' error estimates bound the actual error") {
  int covered = 0, total = 0;
  for (double k : {-1.0, 1.0, 2.0}) {
    const BallProfile p = profile(make_space_form(k), 1.0, 1, 0.01);
    for (std::size_t i = 2; i + 2 < p.size(); i += 3) {
      const double t = p.t[i];
      const double exact = 8 * kPi * (std::pow(sn_prime(k, t), 2) - k * std::pow(sn(k, t), 2));
      const DerivativeEstimate d = second_derivative_A_at(p, i);
      ++total;
      covered += std::abs(d.value - exact) <= d.error_estimate;
    }
  }
  CHECK(covered >= 0.95 * total);
}

TEST_CASE("product fiber-slice oracle") {
  // B_1 in S^2 x R splits into geodesic discs of radius sqrt(1 - h^2) at height h.
  const double oracle =
      integrate([](double h) { return 2 * kPi * (1 - std::cos(std::sqrt(1 - h * h))); }, -1.0, 1.0);
  const BallProfile p = profile(make_product_s2r(1.0), 1.0);
  CHECK(std::abs(p.V.back() / oracle - 1) <= 1e-6);
}

TEST_CASE("profile invariants") {
  for (const MetricFamily& f : {make_doubly_warped(1.5), make_berger_sphere(0.5), make_cap_metric(1.0, 0.2)}) {
    const BallProfile p = profile(f, std::min(0.6, f.safe_radius), 2, 0.01);
    CAPTURE(f.label);
    for (std::size_t k = 0; k < p.size(); ++k) {
      CHECK(p.A[k] > 0.0);
      if (k) CHECK(p.V[k] > p.V[k - 1]);
    }
    CHECK(std::abs(p.A.front() / (4 * kPi * p.t.front() * p.t.front()) - 1) <= 1e-6);
  }
}

TEST_CASE("small-t law A = 4 pi t^2 (1 + O(t^2)) with a stable constant") {
  // On Example 1 the constant is -scal/18; check stability instead of the value.
  const BallProfile p = profile(make_berger_sphere(0.5), 0.2, 2, 0.0025);
  std::vector<double> c;
  for (double t : {0.02, 0.04, 0.08}) {
    const ProfilePoint q = profile_at(p, t);
    c.push_back((q.A / (4 * kPi * t * t) - 1) / (t * t));
  }
  CHECK(std::abs(c[0] - c[1]) <= 0.01 * std::abs(c[1]));
  CHECK(std::abs(c[1] - c[2]) <= 0.02 * std::abs(c[1]));
  // scal = 8 - 2 e^2 on the Berger sphere, so c -> -scal/18
  CHECK(c[0] == doctest::Approx(-(8 - 2 * 0.25) / 18).epsilon(2e-3));
}

TEST_CASE("errors: safe radius, conjugate points, under-resolution") {
  const MetricFamily s = make_space_form(1.0);
  BallOptions o;
  o.ray.t_max = 3.3;
  CHECK_THROWS_AS(ball_functions(s, s.base_point(), o, sphere_quadrature(1)), Error);
  o.allow_unsafe = true;
  try {
    ball_functions(s, s.base_point(), o, sphere_quadrature(1));
    FAIL("expected ConjugateInsideRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConjugateInsideRange);
    CHECK(std::string(e.what()).find("direction") != std::string::npos);
  }
  const MetricFamily dw = make_doubly_warped(2.0);
  BallOptions r;
  r.ray.t_max = 0.8;
  r.ray.step = 0.02;
  r.resolution_tolerance = 1e-9;
  try {
    ball_functions(dw, dw.base_point(), r, sphere_quadrature(1));
    FAIL("expected QuadratureUnderResolved");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureUnderResolved);
  }
}

TEST_CASE("unsafe override is recorded") {
  const MetricFamily f = make_space_form(1.0);
  BallOptions o;
  o.ray.t_max = 2.9;
  o.ray.step = 0.02;
  o.allow_unsafe = true;
  const BallProfile p = ball_functions(f, f.base_point(), o, sphere_quadrature(1));
  CHECK(p.meta.unsafe_override);
}

TEST_CASE("profiles are bitwise reproducible") {
  const BallProfile a = profile(make_doubly_warped(1.5), 0.3, 1, 0.01);
  const BallProfile b = profile(make_doubly_warped(1.5), 0.3, 1, 0.01);
  CHECK(a.A == b.A);
  CHECK(a.V == b.V);
  CHECK(a.hess_sq_int == b.hess_sq_int);
}

}  // TEST_SUITE
