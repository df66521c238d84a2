#include "hetcalc/scenario.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hetcalc/errors.hpp"
#include "hetcalc/sampling.hpp"
#include "hetcalc/weierstrass.hpp"

namespace het {

namespace {

CoefExpr laplace_e2f() { return flat_laplacian(CoefExpr::expf(2)); }

bool is_alpha_prime(const SymbolId& s) { return s.is_param() && s.name() == "alphaP"; }

std::string matrix_rows_str(const Matrix3& m, int rows) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows; ++i) {
    os << (i ? ", [" : "[");
    for (int k = 0; k < 3; ++k) os << (k ? ", " : "") << m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::size_t count_not_divisible(const std::vector<CoefExpr>& entries, const CoefExpr& P) {
  std::size_t bad = 0;
  for (const auto& v : entries)
    if (!exact_quotient(v, P)) ++bad;
  return bad;
}

/// |v| / (sum of absolute term values); zero when every term vanishes.
double relative(const std::pair<double, double>& vs) {
  const auto [v, scale] = vs;
  if (scale == 0) return std::abs(v);
  return std::abs(v) / scale;
}

void set_exact(CheckResult& r, std::size_t nonzero, const std::string& detail = {}) {
  r.residual = static_cast<double>(nonzero);
  r.passed = nonzero == 0;
  r.detail = detail;
}

void set_numeric(CheckResult& r, double max_rel, const std::string& detail = {}) {
  r.residual = max_rel;
  r.passed = std::isfinite(max_rel) && max_rel <= r.tolerance;
  r.detail = detail;
}

class Run {
 public:
  explicit Run(const ScenarioSpec& spec) : spec_(spec) {}

  template <typename Fn>
  void check(ScenarioReport& rep, const std::string& id, const std::string& desc, bool exact, double tol, Fn&& fn) {
    CheckResult r;
    r.id = id;
    r.description = desc;
    r.exact = exact;
    r.tolerance = tol;
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    rep.checks.push_back(std::move(r));
  }

  const CoframeSpec& coframe() {
    if (!c_) c_ = build_coframe(spec_.frame);
    return *c_;
  }
  const FormExpr& torsion() {
    if (!T_) T_ = structure_torsion(coframe());
    return *T_;
  }
  const ConnectionForms& lc() {
    if (!lc_) lc_ = levi_civita(coframe());
    return *lc_;
  }
  Matrix3 A() { return structure_matrix(coframe()); }
  CoefExpr A2() { return frob_norm_sq(A()); }
  CoefExpr B2() const {
    const int rows = spec_.frame.kind == FrameKind::H21 ? 1 : 3;
    CoefExpr s;
    for (int i = 0; i < rows; ++i)
      for (const auto& v : spec_.instanton.matrix[static_cast<std::size_t>(i)]) s += v * v;
    return s;
  }
  /// |Lambda A|^2 over the columns used by the coframe dimension.
  CoefExpr lambda2() {
    Matrix3 L = spec_.instanton.matrix;
    if (coframe().dim() == 5)
      for (auto& row : L) row[1] = row[2] = CoefExpr();
    return frob_norm_sq(L * A());
  }
  const CoefExpr& residual() {
    if (!r_) r_ = anomaly_residual(coframe(), alpha_prime(), spec_.instanton);
    return *r_;
  }

 private:
  const ScenarioSpec& spec_;
  std::optional<CoframeSpec> c_;
  std::optional<FormExpr> T_;
  std::optional<ConnectionForms> lc_;
  std::optional<CoefExpr> r_;
};

void common_checks(Run& run, ScenarioReport& rep) {
  run.check(rep, "integrability", "structure constants satisfy d^2 = 0", true, 0, [&](CheckResult& r) {
    auto res = integrability_check(run.coframe());
    std::size_t bad = 0;
    for (const auto& f : res.residuals) bad += f.components().size();
    set_exact(r, bad);
  });

  run.check(rep, "structure", "the natural G-structure is integrable of the expected type", true, 0,
            [&](CheckResult& r) {
              const auto& c = run.coframe();
              if (c.dim() == 7) {
                auto g = build_g2(c);
                auto res = check_integrable_pure(g);
                std::size_t bad = res.cocalibrated.components().size() + res.pure.components().size();
                FormExpr lee = lee_form(g) - CoefExpr(2) * c.df();
                bad += lee.components().size();
                set_exact(r, bad, "co-calibrated of pure type, Lee form 2 df");
              } else if (c.dim() == 5) {
                build_su2(c);
                set_exact(r, 0, "d eta anti-self-dual, d omegabar_s = 2 df ^ omegabar_s");
              } else {
                throw DimensionMismatch("anomaly scenarios need a 7D or 5D frame");
              }
            });

  run.check(rep, "torsion_dT", "dT = -(Delta e^{2f} + 2|A|^2) e^{-4f} ebar^{1234}", true, 0, [&](CheckResult& r) {
    const auto& c = run.coframe();
    FormExpr dT = exterior_derivative(run.torsion(), c);
    FormExpr want = -(laplace_e2f() + CoefExpr(2) * run.A2()) * c.unbarred_horizontal_volume();
    set_exact(r, (dT - want).components().size());
  });
}

void minus_instanton_check(Run& run, ScenarioReport& rep) {
  run.check(rep, "instanton_minus", "nabla^- instanton residuals factor through Delta e^{2f} + 2|A|^2", true, 0,
            [&](CheckResult& r) {
              const auto& c = run.coframe();
              auto curv = curvature(torsion_connection(run.lc(), run.torsion(), -1), c);
              auto entries = instanton_condition(curv, c);
              const CoefExpr P = laplace_e2f() + CoefExpr(2) * run.A2();
              set_exact(r, count_not_divisible(entries, P), std::to_string(entries.size()) + " nonzero entries");
            });
}

void db_instanton_checks(Run& run, ScenarioReport& rep, const ScenarioSpec& spec,
                         const std::vector<RationalPoint>& pts, const DilatonProfile& prof) {
  const CoefExpr PB = laplace_e2f() + CoefExpr(2) * run.B2();
  run.check(rep, "instanton_auxiliary", "D_B instanton residuals factor through Delta e^{2f} + 2|B|^2", true, 0,
            [&](CheckResult& r) {
              const auto& c = run.coframe();
              auto entries = instanton_condition(curvature(build_DB(spec.instanton.matrix, c), c), c);
              set_exact(r, count_not_divisible(entries, PB), std::to_string(entries.size()) + " nonzero entries");
            });
  run.check(rep, "profile_equation", "Delta e^{2f} + 2|B|^2 = 0 exactly at rational sample points", true, 0,
            [&](CheckResult& r) {
              std::size_t bad = 0;
              for (const auto& x : pts) {
                auto j = prof.exact_jets(x).value();
                if (eval_exact(PB, exact_jet_assignment(j), j.g) != 0) ++bad;
              }
              set_exact(r, bad, std::to_string(pts.size()) + " points");
            });
}

// ---------------------------------------------------------------------------

void run_negative(const ScenarioSpec& spec, ScenarioReport& rep) {
  Run run(spec);
  common_checks(run, rep);

  run.check(rep, "instanton_auxiliary", "D_Lambda satisfies the instanton condition", true, 0, [&](CheckResult& r) {
    const auto& c = run.coframe();
    auto curv = curvature(build_instanton_DLambda(spec.instanton.matrix, c, false), c);
    auto entries = instanton_condition(curv, c);
    std::ostringstream os;
    os << entries.size() << " nonzero entries";
    if (constant_entries(spec.instanton.matrix)) os << ", rank(Lambda) = " << rank(spec.instanton.matrix);
    set_exact(r, entries.size(), os.str());
  });
  minus_instanton_check(run, rep);

  // Constants.
  std::optional<Rational> A2, lam2, alphaP, alpha2;
  try {
    A2 = run.A2().constant_value();
    lam2 = run.lambda2().constant_value();
    if (spec.alphaP) {
      alphaP = *spec.alphaP;
    } else if (*lam2 != 0) {
      alphaP = -2 * *A2 / *lam2;
    }
    if (alphaP) alpha2 = -*alphaP;
  } catch (const std::exception&) {
  }
  if (A2) rep.derived.emplace_back("A2", rational_str(*A2));
  if (lam2) rep.derived.emplace_back("lambda2", rational_str(*lam2));
  if (alphaP) rep.derived.emplace_back("alphaP", rational_str(*alphaP));
  if (alpha2) rep.derived.emplace_back("alpha2", rational_str(*alpha2));

  run.check(rep, "constraint", "2|A|^2 + alpha' lambda^2 = 0 with alpha' < 0", true, 0, [&](CheckResult& r) {
    if (!A2 || !lam2 || !alphaP) throw ConstraintViolated("constants are not determined");
    Rational v = 2 * *A2 + *alphaP * *lam2;
    set_exact(r, (v != 0 || *alphaP >= 0) ? 1 : 0, "2|A|^2 + alpha' lambda^2 = " + rational_str(v));
  });

  run.check(rep, "anomaly_symbolic", "anomaly residual equals the closed-form expansion", true, 0,
            [&](CheckResult& r) {
              CoefExpr want = expected_residual_DLambda(run.A2(), run.lambda2(), alpha_prime());
              set_exact(r, (run.residual() - want).size());
            });

  run.check(rep, "anomaly_onevar", "one-variable reduction equals d/dx^1 of the first integral; u-form identity",
            true, 0, [&](CheckResult& r) {
              const CoefExpr A2e = run.A2(), l2 = run.lambda2();
              CoefExpr red = reduce_onevar(run.residual(), A2e, l2);
              CoefExpr want = reduce_onevar(partial_derivative(solv4_lhs(A2e), 1), A2e, l2);
              CoefExpr uform = u_to_jets(solv4_u_form(A2e)) - solv4_lhs(A2e);
              set_exact(r, (red - want).size() + uform.size());
            });

  if (!alpha2 || *alpha2 <= 0 || !A2) {
    for (const char* id : {"anomaly_numeric", "first_integral", "ode"}) {
      run.check(rep, id, "numeric check on the Weierstrass slice", false, spec.tolerance,
                [](CheckResult&) { throw ConstraintViolated("alpha^2 is not a positive constant"); });
    }
    return;
  }

  const double alpha = std::sqrt(alpha2->get_d());
  const double d = std::sqrt(3.0 * A2->get_d() / (4.0 * alpha2->get_d()));
  rep.derived.emplace_back("alpha", double_str(alpha));
  rep.derived.emplace_back("weierstrass_d", double_str(d));
  rep.derived.emplace_back("weierstrass_d_closed_form_sqrt(3|A|^2)/alpha", double_str(std::sqrt(3.0 * A2->get_d()) / alpha));
  rep.derived.emplace_back("tau_plus", double_str(half_period(d)));
  rep.derived.emplace_back("C0", rational_str(spec.C0));

  auto prof = weierstrass_profile(alpha, d);
  std::vector<Point> pts;
  try {
    pts = sample_points(*prof, spec.samples, spec.seed, spec.min_margin);
  } catch (const std::exception&) {
  }

  run.check(rep, "anomaly_numeric", "anomaly residual on the Weierstrass slice (max relative)", false,
            spec.tolerance, [&](CheckResult& r) {
              if (pts.empty()) throw BadParams("no sample points");
              CoefExpr rn = substitute(run.residual(), SymbolId::param("alphaP"), CoefExpr(*alphaP));
              double worst = 0;
              for (const auto& x : pts) worst = std::max(worst, relative(eval_with_scale(rn, jet_assignment(prof->jets(x)))));
              set_numeric(r, worst, std::to_string(pts.size()) + " points");
            });

  run.check(rep, "first_integral", "first integral equals C0 on the Weierstrass slice (max relative)", false,
            spec.tolerance, [&](CheckResult& r) {
              if (pts.empty()) throw BadParams("no sample points");
              CoefExpr L = solv4_lhs(run.A2()) - CoefExpr(spec.C0);
              double worst = 0;
              for (const auto& x : pts) {
                Assignment a = jet_assignment(prof->jets(x));
                a[SymbolId::param("alpha")] = alpha;
                worst = std::max(worst, relative(eval_with_scale(L, a)));
              }
              set_numeric(r, worst, std::to_string(pts.size()) + " points");
            });

  run.check(rep, "ode", "u'^2 - 4u(u-d)(u+d), relative to 1 + |u|^3", false, spec.ode_tolerance,
            [&](CheckResult& r) {
              if (pts.empty()) throw BadParams("no sample points");
              double worst = 0;
              for (const auto& x : pts) worst = std::max(worst, std::abs(prof->defining_residual(x)));
              set_numeric(r, worst, std::to_string(pts.size()) + " points");
            });
}

void run_positive(const ScenarioSpec& spec, ScenarioReport& rep) {
  Run run(spec);
  common_checks(run, rep);
  if (!spec.alphaP || *spec.alphaP <= 0) throw ConfigError("positive scenarios need alphaP > 0");
  const Rational aP = *spec.alphaP;
  rep.derived.emplace_back("alphaP", rational_str(aP));

  // c* from the residual at the first sample point.
  std::optional<Rational> cstar;
  auto unit = fundamental_profile(1, spec.center);
  auto unit_pts = sample_points(*unit, spec.samples, spec.seed, spec.min_margin);
  std::vector<RationalPoint> pts;
  for (const auto& x : unit_pts) pts.push_back(to_rational_point(x));

  std::unique_ptr<DilatonProfile> prof;
  run.check(rep, "profile_constant", "e^{2f} = c*/|x-e|^2 solves the anomaly equation exactly", true, 0,
            [&](CheckResult& r) {
              CoefExpr rn = substitute(run.residual(), SymbolId::param("alphaP"), CoefExpr(aP));
              auto j1 = unit->exact_jets(pts.front()).value();
              auto laurent = residual_in_profile_constant(rn, exact_jet_assignment(j1), j1.g);
              cstar = solve_two_term(laurent);
              if (!cstar) throw ConstraintViolated("residual has no positive root in the profile constant");
              prof = fundamental_profile(*cstar, spec.center);
              std::size_t bad = 0;
              for (const auto& x : pts) {
                auto j = prof->exact_jets(x).value();
                if (eval_exact(rn, exact_jet_assignment(j), j.g) != 0) ++bad;
              }
              set_exact(r, bad, std::to_string(pts.size()) + " points");
            });
  if (cstar) {
    const Rational closed = Rational(3, 4) * aP;
    Rational ratio = *cstar / closed;
    ratio.canonicalize();
    rep.derived.emplace_back("c_star", rational_str(*cstar));
    rep.derived.emplace_back("c_closed_form_3alphaP/4", rational_str(closed));
    rep.derived.emplace_back("c_star_over_closed_form", rational_str(ratio));
  }
  if (!prof) prof = fundamental_profile(Rational(3, 4) * aP, spec.center);

  db_instanton_checks(run, rep, spec, pts, *prof);
  minus_instanton_check(run, rep);

  run.check(rep, "anomaly_symbolic", "anomaly residual equals the closed-form expansion", true, 0,
            [&](CheckResult& r) {
              CoefExpr want = expected_residual_DB(run.A2(), run.B2(), alpha_prime());
              set_exact(r, (run.residual() - want).size());
            });
}

void run_ball(const ScenarioSpec& spec, ScenarioReport& rep) {
  Run run(spec);
  common_checks(run, rep);

  const Rational A2 = run.A2().constant_value();
  rep.derived.emplace_back("A2", rational_str(A2));
  rep.derived.emplace_back("B2", run.B2().str());
  if (spec.alphaP) rep.derived.emplace_back("alphaP", rational_str(*spec.alphaP));
  auto prof = ball_profile(A2);
  auto num_pts = sample_points(*prof, spec.samples, spec.seed, spec.min_margin);
  std::vector<RationalPoint> pts;
  for (const auto& x : num_pts) pts.push_back(to_rational_point(x));

  db_instanton_checks(run, rep, spec, pts, *prof);
  minus_instanton_check(run, rep);

  CoefExpr r_alpha = run.residual();
  if (spec.alphaP) r_alpha = substitute(r_alpha, SymbolId::param("alphaP"), CoefExpr(*spec.alphaP));
  run.check(rep, "anomaly_symbolic", "anomaly residual equals Delta e^{2f} + 2|A|^2 and is free of alpha'", true, 0,
            [&](CheckResult& r) {
              CoefExpr diff = run.residual() - (laplace_e2f() + CoefExpr(2) * run.A2());
              set_exact(r, diff.size() + (run.residual().contains(is_alpha_prime) ? 1 : 0));
            });
  run.check(rep, "anomaly_exact", "anomaly residual vanishes exactly at rational sample points", true, 0,
            [&](CheckResult& r) {
              std::size_t bad = 0;
              for (const auto& x : pts) {
                auto j = prof->exact_jets(x).value();
                if (eval_exact(r_alpha, exact_jet_assignment(j), j.g) != 0) ++bad;
              }
              set_exact(r, bad, std::to_string(pts.size()) + " points");
            });

  run.check(rep, "dilaton_probe", "scalar identity for phi = -f and phi = -2f (max relative)", false,
            spec.tolerance, [&](CheckResult& r) {
              auto probe = sample_points(*prof, spec.probe_samples, spec.seed + 1, spec.min_margin);
              std::string which;
              double best = INFINITY;
              for (int k : {-1, -2}) {
                CoefExpr id = dilaton_scalar_identity(run.coframe(), run.torsion(), k);
                double worst = 0;
                for (const auto& x : probe) worst = std::max(worst, relative(eval_with_scale(id, jet_assignment(prof->jets(x)))));
                const std::string name = k == -1 ? "-f" : "-2f";
                rep.derived.emplace_back("dilaton_probe_phi=" + name, double_str(worst));
                if (worst <= spec.tolerance) which += (which.empty() ? "phi = " : ", phi = ") + name;
                best = std::min(best, worst);
              }
              rep.derived.emplace_back("dilaton_normalization", which.empty() ? "none" : which);
              set_numeric(r, best, which.empty() ? "no normalization satisfies the identity" : which);
            });
}

void run_contraction(const ScenarioSpec& spec, ScenarioReport& rep) {
  FrameId id0 = spec.frame;
  id0.eps = 0;
  if (id0.kind != FrameKind::ContractionEps6D && id0.kind != FrameKind::ContractionEps5D)
    throw ConfigError("contraction scenarios need an eps6 or eps5 frame");

  std::optional<CoframeSpec> full, small;
  auto get_full = [&]() -> const CoframeSpec& {
    if (!full) full = coframe_from_rows(id0.name() + "[eps=0, 7D]", structure_rows(id0).rows);
    return *full;
  };
  auto get_small = [&]() -> const CoframeSpec& {
    if (!small) small = contract_family(id0, 0);
    return *small;
  };
  Run run(spec);

  run.check(rep, "integrability", "structure constants satisfy d^2 = 0 for eps = 0 and each eps > 0", true, 0,
            [&](CheckResult& r) {
              std::size_t bad = 0;
              std::vector<Rational> all{0};
              all.insert(all.end(), spec.eps_values.begin(), spec.eps_values.end());
              for (const auto& e : all) {
                FrameId ide = id0;
                ide.eps = e;
                for (const auto& f : integrability_check(contract_family(ide, e)).residuals) bad += f.components().size();
              }
              set_exact(r, bad, std::to_string(all.size()) + " values of eps");
            });

  run.check(rep, "structure_limit", "structure forms of the eps = 0 limit equal the direct construction", true, 0,
            [&](CheckResult& r) {
              auto g = build_g2(get_full());
              const auto& c = get_small();
              std::size_t bad = 0;
              if (c.dim() == 6) {
                auto from7 = su3_from_g2(g, c);
                auto direct = build_su3(c);
                bad += (from7.F - direct.F).components().size();
                bad += (from7.psi_plus - direct.psi_plus).components().size();
                bad += (from7.psi_minus - direct.psi_minus).components().size();
                if (from7.J != direct.J) ++bad;
                auto res = check_su3(direct);
                bad += res.FF.components().size() + res.psi_plus.components().size() +
                       res.psi_minus.components().size();
              } else {
                auto s = build_su2(c);
                bad += (truncate_legs(interior(7, g.theta), 5) - s.omegas[0]).components().size();
                bad += (truncate_legs(interior(5, g.theta), 5) - s.omegas[1]).components().size();
                bad += (truncate_legs(interior(6, g.theta), 5) + s.omegas[2]).components().size();
              }
              set_exact(r, bad);
            });

  run.check(rep, "torsion_limit", "torsion and dT of the eps = 0 limit equal the direct construction", true, 0,
            [&](CheckResult& r) {
              const auto& c = get_small();
              const int n = c.dim();
              FormExpr T7 = torsion_3form(build_g2(get_full()));
              FormExpr Tn = structure_torsion(c);
              std::size_t bad = (truncate_legs(T7, n) - Tn).components().size();
              bad += (T7 - extend_legs(truncate_legs(T7, n), 7)).components().size();
              FormExpr dT7 = exterior_derivative(T7, get_full());
              bad += (truncate_legs(dT7, n) - exterior_derivative(Tn, c)).components().size();
              set_exact(r, bad);
            });

  run.check(rep, "p1_limit", "p1(nabla^-) of the eps = 0 limit equals the direct construction", true, 0,
            [&](CheckResult& r) {
              const auto& c = get_small();
              const auto& f = get_full();
              FormExpr p7 = pontryagin4(curvature(torsion_connection(levi_civita(f), structure_torsion(f), -1), f));
              FormExpr pn = pontryagin4(curvature(torsion_connection(levi_civita(c), structure_torsion(c), -1), c));
              set_exact(r, (truncate_legs(p7, c.dim()) - pn).components().size() +
                               (p7 - extend_legs(truncate_legs(p7, c.dim()), 7)).components().size());
            });

  run.check(rep, "anomaly_limit", "anomaly residual of the eps = 0 limit equals the direct construction", true, 0,
            [&](CheckResult& r) {
              CoefExpr r7 = anomaly_residual(get_full(), alpha_prime(), spec.instanton);
              CoefExpr rn = anomaly_residual(get_small(), alpha_prime(), spec.instanton);
              CoefExpr B2;
              for (int i = 0; i < get_small().dim() - 4; ++i)
                for (const auto& v : spec.instanton.matrix[static_cast<std::size_t>(i)]) B2 += v * v;
              CoefExpr want = expected_residual_DB(frob_norm_sq(structure_matrix(get_small())), B2, alpha_prime());
              set_exact(r, (r7 - rn).size() + (rn - want).size());
            });

  run.check(rep, "eps_decay", "curvature components on dropped legs scale linearly in eps", false,
            spec.decay_tolerance, [&](CheckResult& r) {
              auto prof = ball_profile(1);
              auto x = sample_points(*prof, 1, spec.seed, spec.min_margin).front();
              Assignment jets = jet_assignment(prof->jets(x));
              std::vector<int> dropped = get_small().dropped_legs();
              std::vector<double> M;
              for (const auto& e : spec.eps_values) {
                FrameId ide = id0;
                ide.eps = e;
                auto c = contract_family(ide, e);
                auto curv = curvature(torsion_connection(levi_civita(c), structure_torsion(c), -1), c);
                double m = 0;
                for (int i = 1; i <= 7; ++i)
                  for (int j = 1; j <= 7; ++j)
                    for (int k = 1; k <= 7; ++k)
                      for (int l = 1; l <= 7; ++l) {
                        bool touches = false;
                        for (int d : dropped) touches |= (i == d || j == d || k == d || l == d);
                        if (touches) m = std::max(m, std::abs(eval(riemann(curv, i, j, k, l), jets)));
                      }
                M.push_back(m);
                rep.derived.emplace_back("dropped_leg_curvature_eps=" + rational_str(e), double_str(m));
              }
              if (M.size() < 2) throw ConfigError("eps_decay needs at least two eps values");
              double worst = 0;
              for (std::size_t k = 0; k + 1 < M.size(); ++k) {
                const double step = Rational(spec.eps_values[k] / spec.eps_values[k + 1]).get_d();
                worst = std::max(worst, std::abs(M[k] / M[k + 1] / step - 1.0));
              }
              set_numeric(r, worst, "max |ratio / eps step - 1|");
            });
}

}  // namespace

std::string kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Negative:
      return "negative";
    case ScenarioKind::Positive:
      return "positive";
    case ScenarioKind::Ball:
      return "ball";
    case ScenarioKind::Contraction:
      return "contraction";
  }
  return "unknown";
}

ScenarioKind kind_from_name(const std::string& s) {
  for (auto k : {ScenarioKind::Negative, ScenarioKind::Positive, ScenarioKind::Ball, ScenarioKind::Contraction})
    if (kind_name(k) == s) return k;
  throw ConfigError("unknown scenario kind '" + s + "'");
}

bool ScenarioReport::passed() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const CheckResult* ScenarioReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"thm-7d-negative", "thm-7d-positive", "ball-7d",       "thm-5d-negative",
                                              "thm-5d-positive", "contraction-6d",  "contraction-5d"};
  return names;
}

ScenarioSpec catalogue_scenario(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  const Matrix3 e11 = rational_matrix({{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}});
  if (name == "thm-7d-negative") {
    s.kind = ScenarioKind::Negative;
    s.frame = FrameId::k_a(identity_matrix());
    s.instanton = Instanton::d_lambda(e11);
  } else if (name == "thm-7d-positive") {
    s.kind = ScenarioKind::Positive;
    s.frame = FrameId::k_a(identity_matrix());
    s.instanton = Instanton::d_b(zero_matrix());
    s.alphaP = 1;
  } else if (name == "ball-7d") {
    s.kind = ScenarioKind::Ball;
    s.frame = FrameId::k_a(identity_matrix());
    s.instanton = Instanton::d_b(rational_matrix({{{1, 1, 1}, {0, 0, 0}, {0, 0, 0}}}));
  } else if (name == "thm-5d-negative") {
    s.kind = ScenarioKind::Negative;
    s.frame = FrameId::h21(1, 1, 1);
    s.instanton = Instanton::d_lambda(e11);
  } else if (name == "thm-5d-positive") {
    s.kind = ScenarioKind::Positive;
    s.frame = FrameId::h21(1, 1, 1);
    s.instanton = Instanton::d_b(zero_matrix());
    s.alphaP = 1;
  } else if (name == "contraction-6d") {
    s.kind = ScenarioKind::Contraction;
    s.frame = FrameId::eps6(1, 1, 0);
    s.instanton = Instanton::d_b(zero_matrix());
  } else if (name == "contraction-5d") {
    s.kind = ScenarioKind::Contraction;
    s.frame = FrameId::eps5(1, 2, 3, 0);
    s.instanton = Instanton::d_b(zero_matrix());
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return s;
}

void apply_setting(ScenarioSpec& spec, const std::string& key) {
  if (key == "rank2-lambda") {
    if (spec.instanton.kind != Instanton::Kind::DLambda || spec.frame.kind != FrameKind::KA)
      throw ConfigError("rank2-lambda applies to 7D D_Lambda scenarios only");
    spec.instanton.matrix = rational_matrix({{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}});
    spec.alphaP.reset();
    return;
  }
  throw ConfigError("unknown setting '" + key + "'");
}

ScenarioReport run_scenario(const ScenarioSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioReport rep;
  rep.scenario = spec.name;
  rep.kind = kind_name(spec.kind);
  rep.frame = spec.frame.name();
  rep.instanton = spec.instanton.name() + " " + matrix_str(spec.instanton.matrix);
  switch (spec.kind) {
    case ScenarioKind::Negative:
      rep.profile = "weierstrass";
      break;
    case ScenarioKind::Positive:
      rep.profile = "fundamental";
      break;
    case ScenarioKind::Ball:
      rep.profile = "ball";
      break;
    case ScenarioKind::Contraction:
      rep.profile = "ball (numeric jets for the eps ratio test)";
      break;
  }
  try {
    if (spec.frame.kind == FrameKind::KA || spec.frame.kind == FrameKind::H21) {
      Matrix3 A = structure_matrix(build_coframe(spec.frame));
      rep.derived.emplace_back("A", matrix_rows_str(A, spec.frame.kind == FrameKind::H21 ? 1 : 3));
    }
  } catch (const std::exception&) {
  }
  try {
    switch (spec.kind) {
      case ScenarioKind::Negative:
        run_negative(spec, rep);
        break;
      case ScenarioKind::Positive:
        run_positive(spec, rep);
        break;
      case ScenarioKind::Ball:
        run_ball(spec, rep);
        break;
      case ScenarioKind::Contraction:
        run_contraction(spec, rep);
        break;
    }
  } catch (const std::exception& e) {
    CheckResult r;
    r.id = "setup";
    r.description = "scenario parameters";
    r.detail = std::string("error: ") + e.what();
    rep.checks.push_back(std::move(r));
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<CoefExpr> instanton_condition(const CurvatureForms& curv, const CoframeSpec& c) {
  std::vector<CoefExpr> out;
  if (c.dim() == 7) {
    for (auto& [k, v] : g2_instanton_residual(curv, build_g2(c))) out.push_back(v);
  } else if (c.dim() == 5) {
    for (auto& [k, v] : su2_instanton_residual(curv, build_su2(c))) out.push_back(v);
  } else {
    throw DimensionMismatch("instanton condition is defined for the 7D and 5D structures");
  }
  return out;
}

Matrix3 structure_matrix(const CoframeSpec& c) {
  Matrix3 A = zero_matrix();
  auto rows = rows_of(c);
  for (std::size_t i = 0; i < rows.size() && i < 3; ++i) A[i] = rows[i];
  return A;
}

std::string rational_str(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::string double_str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace het
