#include "ricvol/config.hpp"
#include "ricvol/errors.hpp"

#include <doctest.h>

using namespace ricvol;

namespace {

Error error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("config accepted: " << text);
  return Error(ErrorKind::IoError, "");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("documented examples") {
  const RunConfig flat = parse_config("[family] name=space_form kappa=0\n");
  const MetricFamily f = flat.build_family();
  CHECK(f.kind == FamilyKind::SpaceForm);
  CHECK(f.parameter == 0.0);
  CHECK(flat.checks.empty());
  CHECK(flat.quadrature_level(f) == 2);

  const Error e = error_of("[family] name=doubly_warped a=0.5\n");
  CHECK(e.kind() == ErrorKind::ConstraintError);
  CHECK(std::string(e.what()).find("a > 1") != std::string::npos);

  const RunConfig two = parse_config("[family] name=berger epsilon=0.5\n[verify] checks=theorem1,gauss_bonnet\n");
  CHECK(two.checks == std::vector<std::string>{"theorem1", "gauss_bonnet"});
  CHECK(two.build_family().kind == FamilyKind::BergerSphere);
}

TEST_CASE("multi-line sections, comments and every key") {
  const RunConfig c = parse_config(R"(# full example
[family]
name=doubly_warped
)" "a=2 point=0.1,0,0\n"
                                   R"([ray] t_max=0.5 t0=0.001 step=0.01 step_tolerance=1e-9 max_halvings=8
[quadrature] level=3 resolution_tolerance=1e-6
[verify] kappa=1 sec_bound=3 tol_gauss_bonnet=2e-4   # trailing comment
[output] dir=out prefix=run1_
)");
  CHECK(c.family.params.at("a") == 2.0);
  REQUIRE(c.point);
  CHECK((*c.point - Vec3(0.1, 0, 0)).norm() == 0.0);
  CHECK(c.ray.t_max == 0.5);
  CHECK(c.ray.t0 == 0.001);
  CHECK(c.ray.max_halvings == 8);
  CHECK(*c.level == 3);
  CHECK(*c.resolution_tolerance == 1e-6);
  CHECK(*c.kappa == 1.0);
  CHECK(*c.sec_bound == 3.0);
  CHECK(c.tolerance_or("gauss_bonnet", 1.0) == 2e-4);
  CHECK(c.tolerance_or("theorem1", 1e-6) == 1e-6);
  CHECK(c.out_dir == "out");
  CHECK(c.prefix == "run1_");
}

TEST_CASE("parse errors report line and column") {
  const Error unknown = error_of("[family] name=berger epsilon=0.5\n[ray] t_maxx=1\n");
  CHECK(unknown.kind() == ErrorKind::ParseError);
  CHECK(std::string(unknown.what()).find("line 2, column 7") != std::string::npos);
  CHECK(error_of("[famly] name=berger\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=berger epsilon=half\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=berger epsilon\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("name=berger\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=berger epsilon=0.5\n[family] name=berger\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=berger epsilon=0.5\n[verify] checks=theorem3\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=berger epsilon=0.5\n[verify] tol_nothing=1\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=berger epsilon=0.5 [ray\n").kind() == ErrorKind::ParseError);
  CHECK(error_of("[family] name=klein_bottle\n").kind() == ErrorKind::ParseError);
}

TEST_CASE("constraint errors") {
  CHECK(error_of("[family] name=berger epsilon=1.5\n").kind() == ErrorKind::ConstraintError);
  CHECK(error_of("[family] name=berger\n").kind() == ErrorKind::ConstraintError);
  CHECK(error_of("[family] name=berger epsilon=0.5 a=2\n").kind() == ErrorKind::ConstraintError);
  CHECK(error_of("[family] name=space_form kappa=1\n[quadrature] level=0\n").kind() == ErrorKind::ConstraintError);
  CHECK(error_of("[family] name=space_form kappa=-1 point=3,0,0\n").kind() == ErrorKind::ConstraintError);
  const Error unsafe = error_of("[family] name=space_form kappa=1\n[ray] t_max=3\n");
  CHECK(unsafe.kind() == ErrorKind::ConstraintError);
  CHECK(std::string(unsafe.what()).find("safe_radius") != std::string::npos);
  CHECK_NOTHROW(parse_config("[family] name=space_form kappa=1\n[ray] t_max=3 allow_unsafe=true\n"));
}

TEST_CASE("defaults and overrides") {
  RunConfig c = parse_config("[family] name=doubly_warped a=2\n");
  CHECK(c.ray.t_max == 0.8);
  const MetricFamily f = c.build_family();
  CHECK(c.quadrature_level(f) == 8);
  CHECK(*default_kappa(f) == 1.0);
  CHECK(*default_sec_bound(f) == 3.0);
  apply_override(c, "ray.t_max=0.5");
  CHECK(c.ray.t_max == 0.5);
  CHECK(c.quadrature_level(f) == 5);
  CHECK_THROWS_AS(apply_override(c, "ray.nope=1"), Error);
  CHECK_THROWS_AS(apply_override(c, "tmax=1"), Error);
  RunConfig d;
  apply_overrides(d, {"family.name=product_s2r", "family.kappa=1", "verify.checks=sturm"});
  CHECK(d.build_family().kind == FamilyKind::ProductS2R);
  CHECK(d.checks == std::vector<std::string>{"sturm"});
  CHECK(*default_kappa(d.build_family()) == 0.5);
  CHECK_FALSE(default_kappa(make_cap_metric(1.0, 0.2)).has_value());
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), Error);
}

}  // TEST_SUITE
