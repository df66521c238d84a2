#pragma once

// Randomized exact identities shared by the unit tests and the acceptance run.

#include <functional>
#include <sstream>
#include <string>

#include "hetcalc/connection.hpp"
#include "random_forms.hpp"

namespace het::testing {

struct SuiteResult {
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  bool pass() const { return cases > 0 && failures == 0; }
};

namespace detail {

inline SuiteResult run_cases(int n, std::uint64_t seed, const std::function<std::string(RandomForms&)>& one) {
  RandomForms rf(seed);
  SuiteResult r;
  for (int k = 0; k < n; ++k) {
    std::string why = one(rf);
    ++r.cases;
    if (!why.empty()) {
      if (r.failures++ == 0) r.first_failure = "case " + std::to_string(k) + ": " + why;
    }
  }
  return r;
}

inline bool all_zero(const FormMatrix& m) {
  for (int i = 1; i <= m.dim(); ++i)
    for (int j = 1; j <= m.dim(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

}  // namespace detail

inline SuiteResult dd_suite(int n, std::uint64_t seed) {
  return detail::run_cases(n, seed, [](RandomForms& rf) -> std::string {
    const CoframeSpec c = rf.coframe();
    const FormExpr a = rf.form(c.dim(), rf.uniform(0, c.dim() - 2));
    const FormExpr dd = exterior_derivative(exterior_derivative(a, c), c);
    return dd.is_zero() ? "" : c.name() + " d(d a) = " + dd.str();
  });
}

inline SuiteResult leibniz_suite(int n, std::uint64_t seed) {
  return detail::run_cases(n, seed, [](RandomForms& rf) -> std::string {
    const CoframeSpec c = rf.coframe();
    const int p = rf.uniform(0, c.dim() - 1);
    const int q = rf.uniform(0, c.dim() - 1 - p);
    const FormExpr a = rf.form(c.dim(), p), b = rf.form(c.dim(), q);
    const FormExpr lhs = exterior_derivative(wedge(a, b), c);
    const FormExpr rhs =
        wedge(exterior_derivative(a, c), b) + CoefExpr(p % 2 ? -1 : 1) * wedge(a, exterior_derivative(b, c));
    return (lhs - rhs).is_zero() ? "" : c.name() + " Leibniz defect " + (lhs - rhs).str();
  });
}

inline SuiteResult star_suite(int n, std::uint64_t seed) {
  return detail::run_cases(n, seed, [](RandomForms& rf) -> std::string {
    const int dim = rf.uniform(5, 7);
    const int p = rf.uniform(0, dim);
    const FormExpr a = rf.form(dim, p, 2);
    const long sign = (dim == 6 && (p * (6 - p)) % 2 == 1) ? -1 : 1;
    const FormExpr ss = hodge_star(hodge_star(a));
    return ss == CoefExpr(sign) * a ? "" : "dim " + std::to_string(dim) + " degree " + std::to_string(p);
  });
}

/// Connections nabla^g + (s/2) T for a random coframe, a random 3-form T and s = +-1.
inline SuiteResult metricity_suite(int n, std::uint64_t seed) {
  return detail::run_cases(n, seed, [](RandomForms& rf) -> std::string {
    const CoframeSpec c = rf.coframe();
    const FormExpr T = rf.form(c.dim(), 3);
    const int s = rf.uniform(0, 1) ? 1 : -1;
    const auto conn = torsion_connection(levi_civita(c), T, s);
    if (!detail::all_zero(antisymmetry_defect(conn))) return c.name() + " connection not skew";
    if (!detail::all_zero(antisymmetry_defect(curvature(conn, c)))) return c.name() + " curvature not skew";
    return "";
  });
}

/// Levi-Civita is torsion free; nabla^g + (s/2) T has torsion 2-forms s i_k T.
inline SuiteResult first_structure_suite(int n, std::uint64_t seed) {
  return detail::run_cases(n, seed, [](RandomForms& rf) -> std::string {
    const CoframeSpec c = rf.coframe();
    const auto lc = levi_civita(c);
    for (const auto& r : first_structure_residual(lc, c))
      if (!r.is_zero()) return c.name() + " Levi-Civita residual " + r.str();
    const FormExpr T = rf.form(c.dim(), 3);
    const int s = rf.uniform(0, 1) ? 1 : -1;
    const auto res = first_structure_residual(torsion_connection(lc, T, s), c);
    for (int k = 1; k <= c.dim(); ++k)
      if (!(res[static_cast<std::size_t>(k - 1)] == CoefExpr(s) * interior(k, T)))
        return c.name() + " torsion 2-form " + std::to_string(k);
    return "";
  });
}

}  // namespace het::testing
