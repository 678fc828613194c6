#pragma once

// Run configuration: a strict INI-like format.
//
//   [family] name=berger epsilon=0.5
//   [ray] t_max=1.2 step=0.005
//   [verify] checks=theorem1,gauss_bonnet   # comment
//
// A line holds an optional [section] followed by whitespace-separated key=value
// pairs. Unknown sections or keys are ParseErrors.

#include "ricvol/ballvolume.hpp"
#include "ricvol/manifolds.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ricvol {

struct FamilySpec {
  std::string name = "space_form";
  std::map<std::string, double> params;

  MetricFamily build() const;
  std::string describe() const;
};

struct RunConfig {
  FamilySpec family;
  std::optional<Vec3> point;  ///< chart coordinates; default base point otherwise
  RayOptions ray;
  bool ray_t_max_set = false;
  bool allow_unsafe = false;
  std::optional<int> level;  ///< recommended_level(family) when unset
  std::optional<double> resolution_tolerance;
  std::vector<std::string> checks;
  std::optional<double> kappa;       ///< Ricci bound parameter (Ric <= 2 kappa)
  std::optional<double> sec_bound;   ///< sectional bound for the Bishop-Gunter comparison
  std::map<std::string, double> tolerances;  ///< per-check overrides
  std::string out_dir = ".";
  std::string prefix;

  MetricFamily build_family() const { return family.build(); }
  ChartPoint base_point(const MetricFamily& f) const;
  BallOptions ball_options(const MetricFamily& f) const;
  int quadrature_level(const MetricFamily& f) const;
  double tolerance_or(const std::string& check, double fallback) const;
};

/// Known check names in catalogue order.
const std::vector<std::string>& known_checks();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies one "section.key=value" override with the same validation as the file.
void apply_override(RunConfig& cfg, const std::string& assignment);
/// Applies all overrides, then validates once.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments);

/// Default quadrature level for a family (directional concentration of the
/// integrands grows with |curvature| anisotropy).
int recommended_level(const MetricFamily& family, double t_max);

/// Default radius of the verification range for a family (never above safe_radius).
double default_t_max(const MetricFamily& family);

/// Ricci bound parameter kappa with Ric <= 2 kappa for the closed-form families.
std::optional<double> default_kappa(const MetricFamily& family);
/// Upper bound of the sectional curvature for the closed-form families.
std::optional<double> default_sec_bound(const MetricFamily& family);

}  // namespace ricvol
