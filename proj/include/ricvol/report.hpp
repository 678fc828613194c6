#pragma once

// CSV and text output. Floats use 17 significant digits, rows end in '\n'.

#include "ricvol/ballvolume.hpp"
#include "ricvol/verify.hpp"

#include <ostream>
#include <string>

namespace ricvol {

std::string format_double(double x);

void write_csv(std::ostream& out, const BallProfile& profile);
void write_csv(std::ostream& out, const CheckResult& result);
void write_csv(std::ostream& out, const BishopGunterComparison& cmp);

/// Writes to a file; IoError on failure.
template <class T>
void emit_csv(const T& data, const std::string& path);

/// Human-readable block: name, verdict, max residual, tolerance, digest, notes.
void write_summary(std::ostream& out, const CheckResult& result);

}  // namespace ricvol
