#include "ricvol/run.hpp"

#include "ricvol/report.hpp"
#include "ricvol/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <exception>
#include <memory>
#include <sstream>

namespace ricvol {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
    if (keep)
      out += c;
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string output_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  return (dir / (cfg.prefix + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

std::string csv_bytes(const BallProfile& p) {
  std::ostringstream os;
  write_csv(os, p);
  return os.str();
}

// Thrown to mark a check the family cannot carry in full-suite mode.
struct NotApplicable {
  std::string reason;
};

class CheckContext {
 public:
  CheckContext(const RunConfig& cfg, bool strict) : cfg_(cfg), strict_(strict), family_(cfg.build_family()) {}

  const MetricFamily& family() const { return family_; }

  const BallProfile& profile() {
    if (profile_error_) std::rethrow_exception(profile_error_);
    if (!profile_) {
      try {
        profile_ = std::make_unique<BallProfile>(compute(cfg_.quadrature_level(family_)));
      } catch (...) {
        profile_error_ = std::current_exception();
        throw;
      }
    }
    return *profile_;
  }

  BallProfile compute(int level) const {
    return ball_functions(family_, cfg_.base_point(family_), cfg_.ball_options(family_), sphere_quadrature(level));
  }

  // Missing data in strict mode is a precondition failure, otherwise a skip.
  [[noreturn]] void unavailable(const std::string& reason) const {
    if (strict_) throw Error(ErrorKind::Precondition, reason);
    throw NotApplicable{reason};
  }

  double kappa() const {
    if (cfg_.kappa) return *cfg_.kappa;
    if (const auto k = default_kappa(family_)) return *k;
    unavailable("no Ricci bound parameter for " + family_.label + " (set [verify] kappa)");
  }

  double sec_bound() const {
    if (cfg_.sec_bound) return *cfg_.sec_bound;
    if (const auto k = default_sec_bound(family_)) return *k;
    unavailable("no sectional bound for " + family_.label + " (set [verify] sec_bound)");
  }

  double tol(const std::string& check, double fallback) const { return cfg_.tolerance_or(check, fallback); }

  CheckResult run(const std::string& name);

 private:
  const RunConfig& cfg_;
  bool strict_;
  MetricFamily family_;
  std::unique_ptr<BallProfile> profile_;
  std::exception_ptr profile_error_;
};

CheckResult CheckContext::run(const std::string& name) {
  const MetricFamily& f = family_;
  if (name == "gauss_bonnet") return check_gauss_bonnet_identity(profile(), tol(name, 1e-4));
  if (name == "second_variation") return check_second_variation(profile(), tol(name, 1e-4));
  if (name == "sphere_gauss_bonnet") return check_sphere_gauss_bonnet(profile(), tol(name, 1e-4));
  if (name == "drift") return check_drift(profile(), tol(name, 1e-8));
  if (name == "volume_derivative") return check_volume_derivative(profile(), tol(name, 1e-5));
  if (name == "tensor_symmetries") return check_tensor_symmetries(f, tol(name, 1e-10));
  if (name == "riccati") return check_riccati(f, cfg_.ray.t_max, tol(name, 1e-6));
  if (name == "constant_curvature") {
    if (f.kind != FamilyKind::SpaceForm && !cfg_.kappa) unavailable("constant_curvature needs a space form or [verify] kappa");
    const double k = f.kind == FamilyKind::SpaceForm ? f.parameter : *cfg_.kappa;
    std::vector<double> ts;
    for (int i = 1; i <= 20; ++i) ts.push_back(cfg_.ray.t_max * i / 20.0);
    return check_constant_curvature_corollary(k, ts, tol(name, 1e-12));
  }
  if (name == "theorem1") {
    const double k = kappa();
    return check_theorem1(profile(), k, tol(name, 1e-6)).result;
  }
  if (name == "theorem2") {
    if (f.kind == FamilyKind::RotSymmetric) {
      const KPlusTotal c = theorem2_constant(f);
      CheckResult r = check_theorem2(profile(), c.value, tol(name, 1e-6)).result;
      std::ostringstream os;
      os << "C=" << format_double(c.value) << " alternative=" << format_double(c.alternative)
         << " relative_agreement=" << format_double(c.relative_agreement);
      r.notes.push_back(os.str());
      return r;
    }
    if (f.kind == FamilyKind::SpaceForm && f.parameter <= 0.0) {
      CheckResult r = check_theorem2(profile(), 0.0, tol(name, 1e-6)).result;
      r.notes.push_back("C=0 (K+ vanishes identically)");
      return r;
    }
    if (strict_) throw Error(ErrorKind::HypothesisViolated, "no finite total K+ known for " + f.label);
    throw NotApplicable{"no finite total K+ known for " + f.label};
  }
  if (name == "sturm") {
    const double k = kappa();
    return check_sturm_monotonicity(profile(), k, tol(name, 1e-6));
  }
  if (name == "bishop_gunter") {
    const double s = sec_bound();
    const double k = kappa();
    return compare_bishop_gunter(profile(), s, k, tol(name, 1e-6)).result;
  }
  if (name == "eigenvalues") {
    if (f.kind == FamilyKind::RotSymmetric) unavailable("no closed-form spectra for " + f.label);
    return check_example_eigenvalues(f, tol(name, 1e-9));
  }
  if (name == "quadrature_convergence") {
    const BallProfile& coarse = profile();
    const BallProfile fine = compute(2 * coarse.meta.level);
    return check_quadrature_convergence(coarse, fine, tol(name, 1e-7));
  }
  if (name == "csv_reproducibility") {
    const std::string first = csv_bytes(profile());
    const std::string second = csv_bytes(compute(profile().meta.level));
    std::size_t diff = first.size() == second.size() ? 0 : 1;
    for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i) diff += first[i] != second[i];
    CheckResult r;
    r.name = name;
    CheckRow row;
    row.t = profile().t.back();
    row.lhs = static_cast<double>(first.size());
    row.rhs = static_cast<double>(second.size());
    row.residual = static_cast<double>(diff);
    row.tolerance = 0.0;
    row.pass = diff == 0;
    r.rows.push_back(row);
    r.inputs_digest = digest(profile());
    r.notes.push_back("lhs, rhs: byte counts of two independent CSV renderings; residual: differing bytes");
    r.finalize();
    return r;
  }
  throw Error(ErrorKind::Precondition, "unknown check '" + name + "'");
}

std::string outcome_word(CheckOutcome::Status s) {
  switch (s) {
    case CheckOutcome::Status::Pass:
      return "PASS";
    case CheckOutcome::Status::Fail:
      return "FAIL";
    case CheckOutcome::Status::Skipped:
      return "SKIP";
    case CheckOutcome::Status::Error:
      break;
  }
  return "ERROR";
}

RunReport run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RunReport report;
  const bool strict = !cfg.checks.empty();
  const std::vector<std::string>& names = strict ? cfg.checks : known_checks();
  CheckContext ctx(cfg, strict);
  const std::string label = ctx.family().label;
  std::ostringstream summary;
  summary << "family " << label << "\n";
  for (const std::string& name : names) {
    CheckOutcome o;
    o.family = label;
    o.check = name;
    try {
      const CheckResult r = ctx.run(name);
      o.status = r.pass ? CheckOutcome::Status::Pass : CheckOutcome::Status::Fail;
      o.exit_code = r.pass ? kExitPass : kExitFailed;
      o.csv_path = output_path(cfg, name + ".csv");
      emit_csv(r, o.csv_path);
      report.artifacts.push_back(o.csv_path);
      write_summary(summary, r);
      std::ostringstream d;
      d << "max_abs_residual=" << format_double(r.max_abs_residual) << " worst_ratio=" << format_double(r.worst_ratio);
      o.detail = d.str();
    } catch (const NotApplicable& na) {
      o.status = CheckOutcome::Status::Skipped;
      o.detail = na.reason;
      summary << "check " << name << ": SKIP (" << na.reason << ")\n";
    } catch (const Error& e) {
      o.status = CheckOutcome::Status::Error;
      o.exit_code = exit_code_for(e.kind());
      o.detail = std::string(to_string(e.kind())) + ": " + e.what();
      write_error_line(err, e.kind(), label + "/" + name, e.what());
      summary << "check " << name << ": ERROR " << o.detail << "\n";
    }
    report.exit_code = combine_exit_codes(report.exit_code, o.exit_code);
    out << outcome_word(o.status) << ' ' << label << ' ' << name;
    if (!o.detail.empty()) out << " (" << o.detail << ")";
    out << "\n";
    report.outcomes.push_back(std::move(o));
  }
  summary << "verdict " << (report.exit_code == kExitPass ? "PASS" : "FAIL") << " exit=" << report.exit_code << "\n";
  const std::string path = output_path(cfg, "summary.txt");
  write_text(path, summary.str());
  report.artifacts.push_back(path);
  return report;
}

RunReport run_curvature(const RunConfig& cfg, std::ostream& out) {
  const MetricFamily f = cfg.build_family();
  const ChartPoint p = cfg.base_point(f);
  const CurvatureAtPoint c = riemann_at(f, p);
  const KPlusValue kp = k_plus_at(f, p);
  const auto vec = [](const Vec3& v) {
    return format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]);
  };
  std::ostringstream os;
  os << "family " << f.label << "\n"
     << "chart " << to_string(p.chart) << "\n"
     << "point " << vec(p.coords) << "\n";
  const Mat3 g = metric_matrix(f, p);
  for (int i = 0; i < 3; ++i) os << "metric_row" << i << " " << vec(g.row(i).transpose()) << "\n";
  os << "curvature_operator_eigenvalues " << vec(c.op_eigenvalues) << "\n"
     << "ricci_eigenvalues " << vec(c.ricci_eigenvalues) << "\n"
     << "scalar " << format_double(c.scalar) << "\n"
     << "k_plus " << format_double(kp.value) << "\n";
  out << os.str();
  RunReport report;
  const std::string path = output_path(cfg, "curvature.txt");
  write_text(path, os.str());
  report.artifacts.push_back(path);
  return report;
}

RunReport run_ball(const RunConfig& cfg, std::ostream& out) {
  const MetricFamily f = cfg.build_family();
  const BallProfile p = ball_functions(f, cfg.base_point(f), cfg.ball_options(f),
                                       sphere_quadrature(cfg.quadrature_level(f)));
  RunReport report;
  const std::string path = output_path(cfg, "ball.csv");
  emit_csv(p, path);
  report.artifacts.push_back(path);
  std::ostringstream os;
  os << "profile " << digest(p) << "\n"
     << "rows " << p.size() << "\n"
     << "V(t_max) " << format_double(p.V.back()) << "\n"
     << "A(t_max) " << format_double(p.A.back()) << "\n";
  if (p.meta.unsafe_override) os << "warning t_max exceeds safe_radius (override set)\n";
  out << os.str();
  const std::string meta = output_path(cfg, "ball_meta.txt");
  write_text(meta, os.str());
  report.artifacts.push_back(meta);
  return report;
}

RunReport run_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CheckContext ctx(cfg, true);
  const double s = ctx.sec_bound();
  const double k = ctx.kappa();
  const BishopGunterComparison cmp = compare_bishop_gunter(ctx.profile(), s, k, ctx.tol("bishop_gunter", 1e-6));
  RunReport report;
  const std::string path = output_path(cfg, "compare.csv");
  emit_csv(cmp, path);
  report.artifacts.push_back(path);
  std::ostringstream os;
  write_summary(os, cmp.result);
  out << os.str();
  const std::string summary = output_path(cfg, "compare_summary.txt");
  write_text(summary, os.str());
  report.artifacts.push_back(summary);
  report.exit_code = cmp.result.pass ? kExitPass : kExitFailed;
  if (!cmp.result.pass)
    err << "check bishop_gunter failed: worst_ratio=" << format_double(cmp.result.worst_ratio) << "\n";
  return report;
}

}  // namespace

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  if (name == "curvature") return Subcommand::Curvature;
  if (name == "ball") return Subcommand::Ball;
  if (name == "verify") return Subcommand::Verify;
  if (name == "compare") return Subcommand::Compare;
  return std::nullopt;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::QuadratureUnderResolved:
    case ErrorKind::SingularMetric:
      return kExitUnderResolved;
    default:
      return kExitHypothesis;
  }
}

int combine_exit_codes(int a, int b) {
  const auto rank = [](int c) {
    switch (c) {
      case kExitHypothesis:
        return 3;
      case kExitUnderResolved:
        return 2;
      case kExitFailed:
        return 1;
      default:
        return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

void write_error_line(std::ostream& err, ErrorKind kind, const std::string& context, const std::string& message) {
  err << "error kind=" << to_string(kind) << " exit=" << exit_code_for(kind) << " context=" << quote(context)
      << " message=" << quote(message) << "\n";
}

RunReport run(const RunConfig& cfg, Subcommand sub, std::ostream& out, std::ostream& err) {
  RunReport report;
  try {
    switch (sub) {
      case Subcommand::Curvature:
        return run_curvature(cfg, out);
      case Subcommand::Ball:
        return run_ball(cfg, out);
      case Subcommand::Verify:
        return run_verify(cfg, out, err);
      case Subcommand::Compare:
        return run_compare(cfg, out, err);
    }
  } catch (const Error& e) {
    write_error_line(err, e.kind(), cfg.family.describe(), e.what());
    report.exit_code = exit_code_for(e.kind());
  }
  return report;
}

std::vector<RunConfig> catalogue_configs() {
  const auto make = [](const std::string& name, const std::string& key, double value) {
    std::ostringstream text;
    text.precision(17);
    text << "[family] name=" << name << " " << key << "=" << value << "\n";
    return parse_config(text.str());
  };
  std::vector<RunConfig> out;
  for (double k : {-1.0, 0.0, 1.0}) out.push_back(make("space_form", "kappa", k));
  for (double a : {1.5, 2.0}) out.push_back(make("doubly_warped", "a", a));
  for (double e : {0.25, 0.5}) out.push_back(make("berger", "epsilon", e));
  out.push_back(make("product_s2r", "kappa", 1.0));
  out.push_back(parse_config("[family] name=cap r0=1 delta=0.2\n"));
  return out;
}

RunReport run_catalogue(const std::string& out_dir, const std::vector<std::string>& checks, std::ostream& out,
                        std::ostream& err) {
  RunReport total;
  for (RunConfig cfg : catalogue_configs()) {
    cfg.out_dir = out_dir;
    cfg.checks = checks;
    cfg.prefix = slug(cfg.build_family().label) + "_";
    RunReport r = run(cfg, Subcommand::Verify, out, err);
    total.exit_code = combine_exit_codes(total.exit_code, r.exit_code);
    for (auto& o : r.outcomes) total.outcomes.push_back(std::move(o));
    for (auto& a : r.artifacts) total.artifacts.push_back(std::move(a));
  }
  std::size_t pass = 0, fail = 0, skip = 0, error = 0;
  for (const CheckOutcome& o : total.outcomes) {
    switch (o.status) {
      case CheckOutcome::Status::Pass:
        ++pass;
        break;
      case CheckOutcome::Status::Fail:
        ++fail;
        break;
      case CheckOutcome::Status::Skipped:
        ++skip;
        break;
      case CheckOutcome::Status::Error:
        ++error;
        break;
    }
  }
  out << "catalogue: " << pass << " pass, " << fail << " fail, " << error << " error, " << skip << " skipped; exit "
      << total.exit_code << "\n";
  return total;
}

}  // namespace ricvol
