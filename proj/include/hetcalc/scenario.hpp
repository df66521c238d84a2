#pragma once

// Anomaly scenarios: a frame, a dilaton profile, alpha' and an auxiliary
// connection, run through the full chain of checks into a report.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetcalc/anomaly.hpp"
#include "hetcalc/profiles.hpp"

namespace het {

enum class ScenarioKind {
  Negative,     // D_Lambda, alpha' = -alpha^2, Weierstrass slice
  Positive,     // D_B, alpha' > 0, fundamental solution with derived constant
  Ball,         // D_B with |B| = |A|, ball profile
  Contraction,  // eps-families against the direct 6D / 5D constructions
};

std::string kind_name(ScenarioKind k);
ScenarioKind kind_from_name(const std::string& s);  // ConfigError

struct ScenarioSpec {
  std::string name = "custom";
  ScenarioKind kind = ScenarioKind::Negative;
  /// kA or h21 for the anomaly kinds; eps6 or eps5 for contractions.
  FrameId frame;
  Instanton instanton;
  /// Exact alpha'. Negative: derived from 2|A|^2 + alpha' lambda^2 = 0 when
  /// absent. Ball: kept symbolic when absent. Positive: required.
  std::optional<Rational> alphaP;
  /// First-integral constant of the one-variable reduction (Weierstrass needs 0).
  Rational C0 = 0;
  /// Center of the fundamental solution.
  RationalPoint center{};
  std::vector<Rational> eps_values{Rational(1, 10), Rational(1, 100), Rational(1, 1000)};

  std::uint64_t seed = 1;
  int samples = 64;
  int probe_samples = 16;
  double tolerance = 1e-8;       // relative, numeric anomaly and dilaton probe
  double ode_tolerance = 1e-9;   // relative, Weierstrass ODE
  double decay_tolerance = 0.1;  // relative deviation of the eps ratio from the eps step
  double min_margin = 1e-3;      // distance from the singular set
};

struct CheckResult {
  std::string id;
  std::string description;
  bool exact = true;
  bool passed = false;
  /// Numeric checks: max relative residual. Exact checks: number of nonzero
  /// residual entries.
  double residual = 0;
  double tolerance = 0;
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  std::string kind;
  std::string frame;
  std::string profile;
  std::string instanton;
  std::vector<CheckResult> checks;
  /// Derived constants in insertion order, values printed exactly or to 17 digits.
  std::vector<std::pair<std::string, std::string>> derived;
  double wall_time_s = 0;

  bool passed() const;
  const CheckResult* find(const std::string& id) const;
};

/// Frozen catalogue names.
const std::vector<std::string>& scenario_names();
/// Throws ConfigError for an unknown name.
ScenarioSpec catalogue_scenario(const std::string& name);
/// Named variants for `--set`; "rank2-lambda" swaps in a rank-2 Lambda.
/// Throws ConfigError for an unknown key or one that does not apply.
void apply_setting(ScenarioSpec& spec, const std::string& key);

/// Never throws for check failures; errors are recorded in the failing check.
ScenarioReport run_scenario(const ScenarioSpec& spec);

/// Residual entries of the instanton condition for the natural structure of
/// the coframe (G2 in 7D, SU(2) in 5D). Throws DimensionMismatch otherwise.
std::vector<CoefExpr> instanton_condition(const CurvatureForms& curv, const CoframeSpec& c);

/// Structure-matrix entries and |A|^2 read back from the coframe rows.
Matrix3 structure_matrix(const CoframeSpec& c);

std::string rational_str(const Rational& q);
std::string double_str(double v);

}  // namespace het
