#include "ricvol/report.hpp"

#include "ricvol/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ricvol {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const BallProfile& p) {
  out << "t,A,Aprime,V,ric_radial_int,scal_int,hess_sq_int,trS_sq_int\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    out << format_double(p.t[k]) << ',' << format_double(p.A[k]) << ',' << format_double(p.Aprime[k]) << ','
        << format_double(p.V[k]) << ',' << format_double(p.ric_radial_int[k]) << ',' << format_double(p.scal_int[k])
        << ',' << format_double(p.hess_sq_int[k]) << ',' << format_double(p.trS_sq_int[k]) << '\n';
  }
}

void write_csv(std::ostream& out, const CheckResult& r) {
  out << "t,lhs,rhs,residual,tolerance,pass\n";
  for (const CheckRow& row : r.rows) {
    out << format_double(row.t) << ',' << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
        << format_double(row.residual) << ',' << format_double(row.tolerance) << ',' << (row.pass ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const BishopGunterComparison& c) {
  out << "t,V,V_ricci_model,V_sectional_model,margin\n";
  for (std::size_t k = 0; k < c.curve.t.size(); ++k) {
    out << format_double(c.curve.t[k]) << ',' << format_double(c.curve.lhs[k]) << ',' << format_double(c.v_ricci[k])
        << ',' << format_double(c.v_sectional[k]) << ',' << format_double(c.curve.margin[k]) << '\n';
  }
}

template <class T>
void emit_csv(const T& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  write_csv(out, data);
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

template void emit_csv<BallProfile>(const BallProfile&, const std::string&);
template void emit_csv<CheckResult>(const CheckResult&, const std::string&);
template void emit_csv<BishopGunterComparison>(const BishopGunterComparison&, const std::string&);

void write_summary(std::ostream& out, const CheckResult& r) {
  out << "check " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n"
      << "  max_abs_residual " << format_double(r.max_abs_residual) << " (tolerance " << format_double(r.tolerance)
      << ", worst ratio " << format_double(r.worst_ratio) << ")\n"
      << "  rows " << r.rows.size() << "\n"
      << "  inputs " << r.inputs_digest << "\n";
  for (const std::string& n : r.notes) out << "  note " << n << "\n";
}

}  // namespace ricvol
