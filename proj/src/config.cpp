#include "ricvol/config.hpp"

#include "ricvol/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ricvol {
namespace {

struct FamilyKeys {
  std::vector<std::string> required;
};

const std::map<std::string, FamilyKeys>& family_table() {
  static const std::map<std::string, FamilyKeys> table{
      {"space_form", {{"kappa"}}},   {"doubly_warped", {{"a"}}}, {"berger", {{"epsilon"}}},
      {"product_s2r", {{"kappa"}}}, {"cap", {{"r0", "delta"}}}, {"rot_sn", {{"kappa"}}},
  };
  return table;
}

const std::set<std::string> kFamilyParams{"kappa", "a", "epsilon", "r0", "delta"};

[[noreturn]] void parse_error(int line, int column, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << what;
  throw Error(ErrorKind::ParseError, os.str());
}

double to_double(const std::string& v, int line, int column) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    parse_error(line, column, "expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x)) parse_error(line, column, "expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, int line, int column) {
  const double x = to_double(v, line, column);
  if (x != std::floor(x) || std::abs(x) > 1e9) parse_error(line, column, "expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

bool to_bool(const std::string& v, int line, int column) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  parse_error(line, column, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

void set_key(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value, int line,
             int column, int value_column) {
  const auto unknown = [&] { parse_error(line, column, "unknown key '" + key + "' in [" + section + "]"); };
  if (value.empty()) parse_error(line, value_column, "empty value for '" + key + "'");
  if (section == "family") {
    if (key == "name") {
      if (!family_table().count(value)) parse_error(line, value_column, "unknown family '" + value + "'");
      cfg.family.name = value;
    } else if (key == "point") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) parse_error(line, value_column, "point needs three comma-separated coordinates");
      Vec3 p;
      for (int i = 0; i < 3; ++i) p[i] = to_double(parts[static_cast<std::size_t>(i)], line, value_column);
      cfg.point = p;
    } else if (kFamilyParams.count(key)) {
      cfg.family.params[key] = to_double(value, line, value_column);
    } else {
      unknown();
    }
  } else if (section == "ray") {
    if (key == "t_max") {
      cfg.ray.t_max = to_double(value, line, value_column);
      cfg.ray_t_max_set = true;
    } else if (key == "t0") {
      cfg.ray.t0 = to_double(value, line, value_column);
    } else if (key == "step") {
      cfg.ray.step = to_double(value, line, value_column);
    } else if (key == "step_tolerance") {
      cfg.ray.step_tolerance = to_double(value, line, value_column);
    } else if (key == "max_halvings") {
      cfg.ray.max_halvings = to_int(value, line, value_column);
    } else if (key == "allow_unsafe") {
      cfg.allow_unsafe = to_bool(value, line, value_column);
    } else {
      unknown();
    }
  } else if (section == "quadrature") {
    if (key == "level") {
      cfg.level = to_int(value, line, value_column);
    } else if (key == "resolution_tolerance") {
      cfg.resolution_tolerance = to_double(value, line, value_column);
    } else {
      unknown();
    }
  } else if (section == "verify") {
    if (key == "checks") {
      cfg.checks.clear();
      for (const std::string& c : split(value, ',')) {
        if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
          parse_error(line, value_column, "unknown check '" + c + "'");
        cfg.checks.push_back(c);
      }
    } else if (key == "kappa") {
      cfg.kappa = to_double(value, line, value_column);
    } else if (key == "sec_bound") {
      cfg.sec_bound = to_double(value, line, value_column);
    } else if (key.rfind("tol_", 0) == 0) {
      const std::string check = key.substr(4);
      if (std::find(known_checks().begin(), known_checks().end(), check) == known_checks().end()) unknown();
      const double tol = to_double(value, line, value_column);
      if (!(tol > 0.0)) parse_error(line, value_column, "tolerance must be positive");
      cfg.tolerances[check] = tol;
    } else {
      unknown();
    }
  } else if (section == "output") {
    if (key == "dir") {
      cfg.out_dir = value;
    } else if (key == "prefix") {
      cfg.prefix = value;
    } else {
      unknown();
    }
  } else {
    unknown();
  }
}

// Cross-field invariants, checked once everything is read.
void validate(RunConfig& cfg) {
  const MetricFamily f = cfg.family.build();
  if (!cfg.ray_t_max_set) cfg.ray.t_max = default_t_max(f);
  validate(cfg.ray);
  if (cfg.ray.t_max > f.safe_radius * (1.0 + 1e-12) && !cfg.allow_unsafe) {
    std::ostringstream os;
    os << "t_max=" << cfg.ray.t_max << " exceeds safe_radius=" << f.safe_radius << " of " << f.label
       << " (set [ray] allow_unsafe=true to override)";
    throw Error(ErrorKind::ConstraintError, os.str());
  }
  if (cfg.level && *cfg.level < 1) throw Error(ErrorKind::ConstraintError, "quadrature level must be >= 1");
  if (cfg.resolution_tolerance && !(*cfg.resolution_tolerance > 0.0))
    throw Error(ErrorKind::ConstraintError, "resolution_tolerance must be positive");
  if (cfg.point) {
    const ChartPoint p{*cfg.point, f.ray_chart};
    if (f.ray_chart == ChartId::Group && cfg.point->norm() != 0.0)
      throw Error(ErrorKind::ConstraintError, f.label + " is homogeneous: only the identity base point is supported");
    if (!in_chart(f, p)) throw Error(ErrorKind::ConstraintError, "point is outside the chart of " + f.label);
  }
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "gauss_bonnet",       "constant_curvature", "second_variation", "sphere_gauss_bonnet",
      "theorem1",           "theorem2",           "sturm",            "bishop_gunter",
      "eigenvalues",        "tensor_symmetries",  "riccati",          "drift",
      "quadrature_convergence", "volume_derivative", "csv_reproducibility"};
  return names;
}

MetricFamily FamilySpec::build() const {
  const auto it = family_table().find(name);
  if (it == family_table().end()) throw Error(ErrorKind::ConstraintError, "unknown family '" + name + "'");
  for (const auto& [key, value] : params) {
    (void)value;
    const auto& req = it->second.required;
    if (std::find(req.begin(), req.end(), key) == req.end())
      throw Error(ErrorKind::ConstraintError, name + " takes no parameter '" + key + "'");
  }
  const auto get = [&](const std::string& key) {
    const auto p = params.find(key);
    if (p == params.end()) throw Error(ErrorKind::ConstraintError, name + " requires parameter '" + key + "'");
    return p->second;
  };
  if (name == "space_form") return make_space_form(get("kappa"));
  if (name == "doubly_warped") return make_doubly_warped(get("a"));
  if (name == "berger") return make_berger_sphere(get("epsilon"));
  if (name == "product_s2r") return make_product_s2r(get("kappa"));
  if (name == "cap") return make_cap_metric(get("r0"), get("delta"));
  return make_rot_symmetric(RotProfile::sn(get("kappa")));
}

std::string FamilySpec::describe() const {
  std::ostringstream os;
  os << name;
  for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
  return os.str();
}

ChartPoint RunConfig::base_point(const MetricFamily& f) const {
  if (point) return {*point, f.ray_chart};
  return f.base_point();
}

BallOptions RunConfig::ball_options(const MetricFamily&) const {
  BallOptions o;
  o.ray = ray;
  o.allow_unsafe = allow_unsafe;
  o.resolution_tolerance = resolution_tolerance;
  return o;
}

int RunConfig::quadrature_level(const MetricFamily& f) const {
  return level ? *level : recommended_level(f, ray.t_max);
}

double RunConfig::tolerance_or(const std::string& check, double fallback) const {
  const auto it = tolerances.find(check);
  return it == tolerances.end() ? fallback : it->second;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen_sections;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = raw.substr(0, raw.find('#'));
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      const int column = static_cast<int>(i) + 1;
      if (line[i] == '[') {
        const std::size_t close = line.find(']', i);
        if (close == std::string::npos) parse_error(line_no, column, "unterminated section header");
        section = line.substr(i + 1, close - i - 1);
        static const std::set<std::string> sections{"family", "ray", "quadrature", "verify", "output"};
        if (!sections.count(section)) parse_error(line_no, column + 1, "unknown section [" + section + "]");
        if (!seen_sections.insert(section).second) parse_error(line_no, column, "duplicate section [" + section + "]");
        i = close + 1;
        continue;
      }
      std::size_t end = i;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      const std::string token = line.substr(i, end - i);
      const std::size_t eq = token.find('=');
      if (eq == std::string::npos || eq == 0) parse_error(line_no, column, "expected key=value, got '" + token + "'");
      if (section.empty()) parse_error(line_no, column, "key outside of any section");
      set_key(cfg, section, token.substr(0, eq), token.substr(eq + 1), line_no, column,
              column + static_cast<int>(eq) + 1);
      i = end;
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

static void set_override(RunConfig& cfg, const std::string& assignment) {
  const std::size_t dot = assignment.find('.');
  const std::size_t eq = assignment.find('=');
  if (dot == std::string::npos || eq == std::string::npos || dot > eq)
    throw Error(ErrorKind::ParseError, "override must look like section.key=value, got '" + assignment + "'");
  const std::string section = assignment.substr(0, dot);
  static const std::set<std::string> sections{"family", "ray", "quadrature", "verify", "output"};
  if (!sections.count(section)) throw Error(ErrorKind::ParseError, "unknown section '" + section + "' in override");
  set_key(cfg, section, assignment.substr(dot + 1, eq - dot - 1), assignment.substr(eq + 1), 0,
          static_cast<int>(dot) + 2, static_cast<int>(eq) + 2);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  set_override(cfg, assignment);
  validate(cfg);
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) set_override(cfg, a);
  validate(cfg);
}

int recommended_level(const MetricFamily& family, double t_max) {
  if (family.kind == FamilyKind::DoublyWarped) {
    // The e^{-(1+a) r} fibre pinches the direction integrands around +-d_r.
    const double need = std::ceil(10.0 * (1.0 + family.parameter) * t_max / 3.0);
    return static_cast<int>(std::clamp(need, 2.0, 16.0));
  }
  return 2;
}

double default_t_max(const MetricFamily& family) {
  switch (family.kind) {
    case FamilyKind::DoublyWarped:
      return std::min(0.8, family.safe_radius);
    case FamilyKind::ProductS2R:
      return std::min(1.4 / std::sqrt(family.parameter), family.safe_radius);
    case FamilyKind::SpaceForm:
      return std::min(1.0, family.safe_radius);
    default:
      return family.safe_radius;
  }
}

std::optional<double> default_kappa(const MetricFamily& family) {
  const double p = family.parameter;
  switch (family.kind) {
    case FamilyKind::SpaceForm:
      return p;
    case FamilyKind::DoublyWarped:
      return p - 1.0;
    case FamilyKind::BergerSphere:
      return 2.0 - p * p;
    case FamilyKind::ProductS2R:
      return 0.5 * p;
    default:
      return std::nullopt;
  }
}

std::optional<double> default_sec_bound(const MetricFamily& family) {
  const double p = family.parameter;
  switch (family.kind) {
    case FamilyKind::SpaceForm:
    case FamilyKind::ProductS2R:
      return p;
    case FamilyKind::DoublyWarped:
      return p * p - 1.0;
    case FamilyKind::BergerSphere:
      return 4.0 - 3.0 * p * p;
    default:
      return std::nullopt;
  }
}

}  // namespace ricvol
