#pragma once

// Subcommand dispatch and exit-code aggregation.

#include "ricvol/config.hpp"
#include "ricvol/errors.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ricvol {

enum class Subcommand { Curvature, Ball, Verify, Compare };

std::optional<Subcommand> parse_subcommand(const std::string& name);

enum ExitCode : int {
  kExitPass = 0,
  kExitFailed = 1,
  kExitHypothesis = 2,
  kExitUnderResolved = 3,
};

/// 2 for hypothesis, precondition and input errors, 3 for numerics that did not resolve.
int exit_code_for(ErrorKind kind);
/// Precedence 2 > 3 > 1 > 0.
int combine_exit_codes(int a, int b);

/// One structured line: "error kind=<Kind> context=<ctx> message=<quoted>".
void write_error_line(std::ostream& err, ErrorKind kind, const std::string& context, const std::string& message);

struct CheckOutcome {
  std::string family;
  std::string check;
  enum class Status { Pass, Fail, Skipped, Error } status = Status::Skipped;
  int exit_code = kExitPass;
  std::string detail;
  std::string csv_path;
};

struct RunReport {
  int exit_code = kExitPass;
  std::vector<CheckOutcome> outcomes;
  std::vector<std::string> artifacts;
};

/// Runs one subcommand. With an empty check list, verify runs the full suite,
/// skipping checks whose hypotheses the family lacks.
RunReport run(const RunConfig& cfg, Subcommand sub, std::ostream& out, std::ostream& err);

/// Catalogue configurations: three space forms, two doubly warped, two Berger,
/// one product and the cap metric.
std::vector<RunConfig> catalogue_configs();

/// verify on every catalogue configuration, artifacts under out_dir.
RunReport run_catalogue(const std::string& out_dir, const std::vector<std::string>& checks, std::ostream& out,
                        std::ostream& err);

}  // namespace ricvol
