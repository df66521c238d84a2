#include "hetcalc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hetcalc/errors.hpp"
#include "hetcalc/sampling.hpp"

namespace het {

using nlohmann::ordered_json;

namespace {

Rational json_rational(const ordered_json& v, const std::string& what) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) return to_rational(v.get<double>());
    if (v.is_string()) {
      Rational q(v.get<std::string>());
      q.canonicalize();
      return q;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(what + " must be a number or a rational string like \"-3/8\"");
}

Matrix3 json_matrix(const ordered_json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(what + " must be a 3x3 array");
  Matrix3 m;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_array() || v[i].size() != 3) throw ConfigError(what + " must be a 3x3 array");
    for (std::size_t k = 0; k < 3; ++k) m[i][k] = json_rational(v[i][k], what);
  }
  return m;
}

std::array<CoefExpr, 3> json_triple(const ordered_json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(what + " must be an array of three numbers");
  std::array<CoefExpr, 3> out;
  for (std::size_t k = 0; k < 3; ++k) out[k] = json_rational(v[k], what);
  return out;
}

FrameId json_frame(const ordered_json& v) {
  if (!v.is_object() || !v.contains("id")) throw ConfigError("frame must be an object with an \"id\"");
  const std::string id = v["id"].get<std::string>();
  auto num = [&](const char* key, long fallback) {
    return v.contains(key) ? CoefExpr(json_rational(v[key], key)) : CoefExpr(fallback);
  };
  if (id == "kA") return FrameId::k_a(v.contains("A") ? json_matrix(v["A"], "frame.A") : identity_matrix());
  if (id == "gH") return FrameId::quaternionic_heisenberg();
  if (id == "h5") return FrameId::h5(num("a", 1), num("b", 1));
  if (id == "h3") return FrameId::h3(num("a", 1));
  if (id == "eps6") return FrameId::eps6(num("a", 1), num("b", 1), 0);
  if (id == "h21" || id == "eps5") {
    auto a = v.contains("a") ? json_triple(v["a"], "frame.a") : std::array<CoefExpr, 3>{1, 1, 1};
    return id == "h21" ? FrameId::h21(a[0], a[1], a[2]) : FrameId::eps5(a[0], a[1], a[2], 0);
  }
  throw ConfigError("unknown frame id '" + id + "' (expected gH, kA, h5, h3, h21, eps6, eps5)");
}

void write_text(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + *path + "' for writing");
  f << text;
  if (!f) throw ConfigError("failed writing '" + *path + "'");
}

std::string full_precision(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// verify

ScenarioSpec spec_from_config(const ordered_json& cfg, VerifyOptions& opts) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> top{"scenario", "seed",  "samples", "probe_samples", "tolerances",
                                            "set",      "out",   "spec"};
  for (const auto& [k, v] : cfg.items())
    if (std::find(top.begin(), top.end(), k) == top.end()) throw ConfigError("unknown config key '" + k + "'");

  ScenarioSpec spec;
  try {
    std::string name = opts.scenario;
    if (name.empty() && cfg.contains("scenario")) name = cfg["scenario"].get<std::string>();
    if (!name.empty()) {
      spec = catalogue_scenario(name);
    } else if (!cfg.contains("spec")) {
      throw ConfigError("config names no scenario and gives no inline spec");
    }
    if (cfg.contains("spec")) {
      const auto& s = cfg["spec"];
      if (!s.is_object()) throw ConfigError("spec must be an object");
      if (name.empty()) spec.name = "custom";
      if (s.contains("name")) spec.name = s["name"].get<std::string>();
      if (s.contains("kind")) spec.kind = kind_from_name(s["kind"].get<std::string>());
      if (s.contains("frame")) spec.frame = json_frame(s["frame"]);
      if (s.contains("instanton")) {
        const auto& in = s["instanton"];
        const std::string kind = in.value("kind", std::string("DLambda"));
        Matrix3 m = in.contains("matrix") ? json_matrix(in["matrix"], "instanton.matrix") : zero_matrix();
        if (kind == "DLambda")
          spec.instanton = Instanton::d_lambda(m);
        else if (kind == "DB")
          spec.instanton = Instanton::d_b(m);
        else
          throw ConfigError("instanton.kind must be DLambda or DB");
      }
      if (s.contains("alphaP")) {
        if (s["alphaP"].is_null())
          spec.alphaP.reset();
        else
          spec.alphaP = json_rational(s["alphaP"], "alphaP");
      }
      if (s.contains("C0")) spec.C0 = json_rational(s["C0"], "C0");
      if (s.contains("center")) {
        const auto& c = s["center"];
        if (!c.is_array() || c.size() != 4) throw ConfigError("center must have four entries");
        for (std::size_t i = 0; i < 4; ++i) spec.center[i] = json_rational(c[i], "center");
      }
      if (s.contains("eps_values")) {
        spec.eps_values.clear();
        for (const auto& e : s["eps_values"]) spec.eps_values.push_back(json_rational(e, "eps_values"));
      }
    }
    if (cfg.contains("seed")) spec.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("samples")) spec.samples = cfg["samples"].get<int>();
    if (cfg.contains("probe_samples")) spec.probe_samples = cfg["probe_samples"].get<int>();
    if (cfg.contains("tolerances")) {
      const auto& t = cfg["tolerances"];
      spec.tolerance = t.value("numeric", spec.tolerance);
      spec.ode_tolerance = t.value("ode", spec.ode_tolerance);
      spec.decay_tolerance = t.value("decay", spec.decay_tolerance);
      spec.min_margin = t.value("min_margin", spec.min_margin);
    }
    if (cfg.contains("set"))
      for (const auto& k : cfg["set"]) apply_setting(spec, k.get<std::string>());
    if (cfg.contains("out") && !opts.out) opts.out = cfg["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (spec.samples < 1 || spec.probe_samples < 1) throw ConfigError("sample counts must be positive");
  return spec;
}

ScenarioSpec resolve_verify_spec(VerifyOptions& opts) {
  ScenarioSpec spec;
  if (opts.config_path) {
    std::ifstream f(*opts.config_path);
    if (!f) throw ConfigError("cannot read config '" + *opts.config_path + "'");
    ordered_json cfg;
    try {
      cfg = ordered_json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    spec = spec_from_config(cfg, opts);
  } else {
    if (opts.scenario.empty()) throw ConfigError("verify needs --scenario or --config");
    spec = catalogue_scenario(opts.scenario);
  }
  if (opts.seed) spec.seed = *opts.seed;
  for (const auto& k : opts.settings) apply_setting(spec, k);
  return spec;
}

ordered_json report_to_json(const ScenarioReport& rep, const ScenarioSpec& spec, bool timing) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = "verify";
  j["scenario"] = rep.scenario;
  j["kind"] = rep.kind;
  j["frame"] = rep.frame;
  j["profile"] = rep.profile;
  j["instanton"] = rep.instanton;
  j["seed"] = spec.seed;
  j["samples"] = spec.samples;
  j["passed"] = rep.passed();
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["description"] = c.description;
    cj["mode"] = c.exact ? "exact" : "numeric";
    cj["passed"] = c.passed;
    if (c.exact)
      cj["nonzero_residual_entries"] = static_cast<long>(c.residual);
    else
      cj["residual"] = c.residual;
    if (!c.exact) cj["tolerance"] = c.tolerance;
    cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  ordered_json derived = ordered_json::object();
  for (const auto& [k, v] : rep.derived) derived[k] = v;
  j["derived"] = std::move(derived);
  if (timing) j["wall_time_s"] = rep.wall_time_s;
  return j;
}

int cmd_verify(VerifyOptions opts, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec;
  try {
    spec = resolve_verify_spec(opts);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  const ScenarioReport rep = run_scenario(spec);
  try {
    write_text(opts.out, report_to_json(rep, spec, opts.timing).dump(2) + "\n", out);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto& c : rep.checks)
    if (!c.passed) err << "FAIL " << rep.scenario << " " << c.id << ": " << c.detail << "\n";
  if (opts.out) out << rep.scenario << ": " << (rep.passed() ? "pass" : "FAIL") << "\n";
  return rep.passed() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// dump-profile

std::vector<Point> profile_grid(const DilatonProfile& p, int n) {
  if (n < 1) throw BadParams("grid needs at least one point");
  double lo = -0.5, hi = 0.5;
  const std::string name = p.name();
  if (name == "weierstrass") {
    std::tie(lo, hi) = p.sample_box();  // one period (0, 2 tau_+)
  } else if (name == "ball") {
    lo = -1;
    hi = 1;
  } else if (name == "fundamental") {
    lo = -2;
    hi = 2;
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  // half-step offsets keep both ends (and the midpoint) off the grid
  for (int k = 0; k < n; ++k) out.push_back(Point{lo + (hi - lo) * (k + 0.5) / n, 0, 0, 0});
  return out;
}

int cmd_dump_profile(const DumpOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    auto prof = make_profile(opts.profile, parse_params(opts.params));
    auto pts = profile_grid(*prof, opts.grid);
    std::ostringstream csv;
    csv << "x,u,f,e2f,residual\n";
    for (const auto& x : pts) {
      auto j = prof->jets(x);
      csv << full_precision(x[0]) << ',' << full_precision(prof->u(x)) << ',' << full_precision(0.5 * std::log(j.g))
          << ',' << full_precision(j.g) << ',' << full_precision(prof->defining_residual(x)) << '\n';
    }
    write_text(opts.out, csv.str(), out);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// crosscheck

const std::vector<std::string>& crosscheck_expressions() {
  static const std::vector<std::string> ids{"exp2f", "grad2", "lap-exp2f", "dT"};
  return ids;
}

CrosscheckResult numeric_crosscheck(const DilatonProfile& prof, const std::string& expr, double step, int samples,
                                    std::uint64_t seed, double margin, const Assignment& perturbation) {
  if (!(step > 0)) throw ConfigError("step must be positive");
  auto ids = crosscheck_expressions();
  if (std::find(ids.begin(), ids.end(), expr) == ids.end())
    throw ConfigError("unknown expression id '" + expr + "' (expected exp2f, grad2, lap-exp2f, dT)");

  auto pts = sample_points(prof, samples, seed, margin);
  auto jets_at = [&](const Point& x) { return jet_assignment(prof.jets(x)); };
  auto symbolic_jets = [&](const Point& x) {
    Assignment a = jets_at(x);
    for (const auto& [s, d] : perturbation) a[s] += d;
    return a;
  };
  auto shifted = [](Point x, int i, double h) {
    x[static_cast<std::size_t>(i - 1)] += h;
    return x;
  };

  std::vector<std::pair<double, double>> pairs;  // (symbolic, finite difference)
  double scale = 0;  // largest sum of absolute term values on the symbolic side
  auto symbolic = [&](const CoefExpr& e, const Assignment& a) {
    auto [v, sc] = eval_with_scale(e, a);
    scale = std::max(scale, sc);
    return v;
  };
  if (expr == "dT") {
    const CoframeSpec c = build_coframe(FrameId::k_a(identity_matrix()));
    const FormExpr T = structure_torsion(c);
    const FormExpr dT = exterior_derivative(T, c);
    for (const auto& x : pts) {
      const Assignment a = symbolic_jets(x);
      const Assignment a0 = jets_at(x);
      const double emf = std::exp(-a0.at(SymbolId::jet({})));
      std::map<Mask, double> fd;
      for (const auto& [I, coef] : T.components()) {
        const double TI = eval(coef, a0);
        for (const auto& [J, v] : c.dbar_basis(I).components()) fd[J] += TI * eval(v, a0);
        for (int i = 1; i <= 4; ++i) {
          const Mask mi = mask_of({i});
          if (I & mi) continue;
          const double d =
              (eval(coef, jets_at(shifted(x, i, step))) - eval(coef, jets_at(shifted(x, i, -step)))) / (2 * step);
          fd[I | mi] += merge_sign(mi, I) * emf * d;
        }
      }
      for (const auto& [J, v] : fd) pairs.emplace_back(symbolic(dT.coeff(J), a), v);
      for (const auto& [J, coef] : dT.components())
        if (!fd.count(J)) pairs.emplace_back(symbolic(coef, a), 0.0);
    }
  } else {
    CoefExpr e;
    if (expr == "exp2f") e = CoefExpr::expf(2);
    if (expr == "grad2") e = grad_norm_sq();
    if (expr == "lap-exp2f") e = flat_laplacian(CoefExpr::expf(2));
    std::array<CoefExpr, 4> de;
    for (int i = 1; i <= 4; ++i) de[static_cast<std::size_t>(i - 1)] = partial_derivative(e, i);
    for (const auto& x : pts) {
      const Assignment a = symbolic_jets(x);
      for (int i = 1; i <= 4; ++i) {
        const double fd =
            (eval(e, jets_at(shifted(x, i, step))) - eval(e, jets_at(shifted(x, i, -step)))) / (2 * step);
        pairs.emplace_back(symbolic(de[static_cast<std::size_t>(i - 1)], a), fd);
      }
    }
  }

  CrosscheckResult r;
  r.comparisons = static_cast<int>(pairs.size());
  for (const auto& [s, f] : pairs) r.max_rel_error = std::max(r.max_rel_error, std::abs(s - f));
  if (scale > 0) r.max_rel_error /= scale;
  r.passed = std::isfinite(r.max_rel_error) && r.max_rel_error <= kCrosscheckTolerance;
  return r;
}

int cmd_crosscheck(const CrosscheckOptions& opts, std::ostream& out, std::ostream& err) {
  CrosscheckResult r;
  Assignment perturbation;
  try {
    if (!opts.perturb.empty()) {
      auto eq = opts.perturb.find('=');
      if (eq == std::string::npos) throw ConfigError("--perturb expects sym=delta");
      perturbation[parse_symbol(opts.perturb.substr(0, eq))] = parse_params("d=" + opts.perturb.substr(eq + 1)).at("d");
    }
    auto prof = make_profile(opts.profile, parse_params(opts.params));
    r = numeric_crosscheck(*prof, opts.expr, opts.step, opts.samples, opts.seed, opts.margin, perturbation);
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = "crosscheck";
    j["profile"] = opts.profile;
    j["expr"] = opts.expr;
    j["step"] = opts.step;
    j["samples"] = opts.samples;
    j["seed"] = opts.seed;
    j["margin"] = opts.margin;
    if (!opts.perturb.empty()) j["perturb"] = opts.perturb;
    j["comparisons"] = r.comparisons;
    j["max_rel_error"] = r.max_rel_error;
    j["tolerance"] = kCrosscheckTolerance;
    j["passed"] = r.passed;
    write_text(opts.out, j.dump(2) + "\n", out);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return r.passed ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

std::map<std::string, double> parse_params(const std::string& s) {
  std::map<std::string, double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + item + "' is not of the form k=v");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    double v;
    try {
      auto slash = val.find('/');
      if (slash != std::string::npos) {
        Rational q(val);
        q.canonicalize();
        v = q.get_d();
      } else {
        std::size_t used = 0;
        v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
      }
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "' has a non-numeric value '" + val + "'");
    }
    out[key] = v;
  }
  return out;
}

SymbolId parse_symbol(const std::string& s) {
  if (s == "f") return SymbolId::jet({});
  if (s.size() > 2 && s[0] == 'f' && s[1] == '_') {
    std::vector<int> dirs;
    for (char ch : s.substr(2)) {
      if (ch < '1' || ch > '4') throw ConfigError("bad jet name '" + s + "'");
      dirs.push_back(ch - '0');
    }
    if (dirs.size() > static_cast<std::size_t>(kMaxJetOrder)) throw ConfigError("jet order too high in '" + s + "'");
    std::sort(dirs.begin(), dirs.end());
    return SymbolId::jet(std::span<const int>(dirs));
  }
  if (s.empty() || s.size() > 15) throw ConfigError("bad symbol name '" + s + "'");
  return SymbolId::param(s);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hetcalc: exterior-calculus checks of heterotic solutions on K_A frames"};
  app.require_subcommand(1);

  VerifyOptions vo;
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "run a scenario and write a JSON report");
  verify->add_option("--scenario", vo.scenario, "catalogue name");
  auto* cfg_opt = verify->add_option("--config", config_path, "JSON config file");
  auto* seed_opt = verify->add_option("--seed", seed, "sampling seed");
  auto* out_opt = verify->add_option("--out", out_path, "report path (stdout when absent)");
  verify->add_option("--set", vo.settings, "named variant, e.g. rank2-lambda");
  verify->add_flag("--timing", vo.timing, "include wall time in the report");

  DumpOptions dopt;
  std::string dump_out;
  auto* dump = app.add_subcommand("dump-profile", "write a profile along the x^1 axis as CSV");
  dump->add_option("--profile", dopt.profile, "weierstrass, fundamental, ball or custom")->required();
  dump->add_option("--params", dopt.params, "k=v,... profile parameters");
  dump->add_option("--grid", dopt.grid, "number of grid points");
  auto* dump_out_opt = dump->add_option("--out", dump_out, "CSV path (stdout when absent)");

  CrosscheckOptions copt;
  std::string cross_out;
  auto* cross = app.add_subcommand("crosscheck", "compare symbolic derivatives with finite differences");
  cross->add_option("--profile", copt.profile, "profile name")->required();
  cross->add_option("--params", copt.params, "k=v,... profile parameters");
  cross->add_option("--expr", copt.expr, "exp2f, grad2, lap-exp2f or dT")->required();
  cross->add_option("--step", copt.step, "finite-difference step");
  cross->add_option("--samples", copt.samples, "number of sample points");
  cross->add_option("--seed", copt.seed, "sampling seed");
  cross->add_option("--margin", copt.margin, "minimum distance from the singular set");
  cross->add_option("--perturb", copt.perturb, "sym=delta added to a jet on the symbolic side");
  auto* cross_out_opt = cross->add_option("--out", cross_out, "report path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*verify) {
      if (*cfg_opt) vo.config_path = config_path;
      if (*seed_opt) vo.seed = seed;
      if (*out_opt) vo.out = out_path;
      return cmd_verify(vo, out, err);
    }
    if (*dump) {
      if (*dump_out_opt) dopt.out = dump_out;
      return cmd_dump_profile(dopt, out, err);
    }
    if (*cross) {
      if (*cross_out_opt) copt.out = cross_out;
      return cmd_crosscheck(copt, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace het
