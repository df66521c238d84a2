#pragma once

// Batch driver: scenario verification with JSON reports, profile dumps to
// CSV and the finite-difference cross-check of the symbolic ring.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetcalc/scenario.hpp"

namespace het {

inline constexpr int kReportSchemaVersion = 1;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

struct VerifyOptions {
  std::string scenario;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> settings;
  /// Adds wall time to the report (which then differs between runs).
  bool timing = false;
};

/// Builds the scenario from the catalogue name, the optional JSON config and
/// the command-line overrides. Sets `out` from the config when the flag is
/// absent. Throws ConfigError.
ScenarioSpec resolve_verify_spec(VerifyOptions& opts);

/// Parses a config document (see README for the schema). Throws ConfigError.
ScenarioSpec spec_from_config(const nlohmann::ordered_json& cfg, VerifyOptions& opts);

nlohmann::ordered_json report_to_json(const ScenarioReport& rep, const ScenarioSpec& spec, bool timing);

int cmd_verify(VerifyOptions opts, std::ostream& out, std::ostream& err);

struct DumpOptions {
  std::string profile;
  std::string params;
  int grid = 256;
  std::optional<std::string> out;
};

/// Points along the x^1 axis through the profile's domain.
std::vector<Point> profile_grid(const DilatonProfile& p, int n);
int cmd_dump_profile(const DumpOptions& opts, std::ostream& out, std::ostream& err);

struct CrosscheckOptions {
  std::string profile;
  std::string params;
  std::string expr;
  double step = 1e-4;
  int samples = 16;
  std::uint64_t seed = 1;
  /// Minimum distance of sample points from the singular set. Central
  /// differences of a double pole at distance r carry a relative error of
  /// about 2 h^2 / r^2, so the default keeps that below 1e-6 at h = 1e-4.
  double margin = 0.3;
  /// "sym=delta" shifts a jet in the symbolic evaluation only.
  std::string perturb;
  std::optional<std::string> out;
};

struct CrosscheckResult {
  double max_rel_error = 0;
  int comparisons = 0;
  bool passed = false;
};

inline constexpr double kCrosscheckTolerance = 1e-6;

/// Expression ids: exp2f, grad2, lap-exp2f, dT. Errors are relative to the
/// largest sum of absolute symbolic term values over the sample (cancellations to
/// zero stay measurable). Throws ConfigError for an unknown id.
CrosscheckResult numeric_crosscheck(const DilatonProfile& prof, const std::string& expr, double step, int samples,
                                    std::uint64_t seed, double margin, const Assignment& perturbation = {});
const std::vector<std::string>& crosscheck_expressions();

int cmd_crosscheck(const CrosscheckOptions& opts, std::ostream& out, std::ostream& err);

/// "k=v,k=v" into numbers. Throws ConfigError.
std::map<std::string, double> parse_params(const std::string& s);
/// A jet or parameter name as printed by SymbolId::str ("f_1", "f_12", "alpha").
SymbolId parse_symbol(const std::string& s);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace het
