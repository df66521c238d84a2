#include "hetcalc/anomaly.hpp"

#include "hetcalc/errors.hpp"

namespace het {

CoefExpr alpha_prime() { return CoefExpr::param("alphaP"); }
CoefExpr alpha_symbol() { return CoefExpr::param("alpha"); }

ConnectionForms build_instanton(const Instanton& inst, const CoframeSpec& c) {
  if (inst.kind == Instanton::Kind::DLambda) return build_instanton_DLambda(inst.matrix, c, true);
  return build_DB(inst.matrix, c);
}

AnomalyTerms anomaly_terms(const CoframeSpec& c, const CoefExpr& alphaP, const Instanton& inst) {
  AnomalyTerms out;
  out.T = structure_torsion(c);
  out.dT = exterior_derivative(out.T, c);
  const auto minus = torsion_connection(levi_civita(c), out.T, -1);
  out.p1_minus = pontryagin4(curvature(minus, c));
  out.p1_inst = pontryagin4(curvature(build_instanton(inst, c), c));
  out.defect = out.dT - (Rational(1, 4) * alphaP) * (out.p1_minus - out.p1_inst);

  const Mask vol = mask_of({1, 2, 3, 4});
  for (const auto& [m, coef] : out.defect.components())
    if (m != vol) throw ConstraintViolated("anomaly defect has a component off ebar^{1234}: " + out.defect.str());
  out.residual = -(CoefExpr::expf(4) * out.defect.coeff(vol));
  return out;
}

CoefExpr anomaly_residual(const CoframeSpec& c, const CoefExpr& alphaP, const Instanton& inst) {
  return anomaly_terms(c, alphaP, inst).residual;
}

CoefExpr expected_residual_DLambda(const CoefExpr& A2, const CoefExpr& LA2, const CoefExpr& alphaP) {
  CoefExpr bracket = CoefExpr(8) * (hessian2() + p_laplacian4()) -
                     CoefExpr(3) * A2 * flat_laplacian(CoefExpr::expf(-2)) + CoefExpr(4) * LA2;
  return flat_laplacian(CoefExpr::expf(2)) + CoefExpr(2) * A2 + Rational(1, 4) * alphaP * bracket;
}

CoefExpr expected_residual_DB(const CoefExpr& A2, const CoefExpr& B2, const CoefExpr& alphaP) {
  return flat_laplacian(CoefExpr::expf(2)) + CoefExpr(2) * A2 -
         Rational(3, 4) * alphaP * (A2 - B2) * flat_laplacian(CoefExpr::expf(-2));
}

CoefExpr reduce_onevar(const CoefExpr& r, const CoefExpr& A2, const CoefExpr& lambda2,
                       const std::function<bool(const SymbolId&)>& eliminate) {
  CoefExpr e = drop_terms(r, [](const SymbolId& s) {
    if (!s.is_jet()) return false;
    for (int k = 0; k < s.order(); ++k)
      if (s.dir(k) != 1) return true;
    return false;
  });
  const CoefExpr alpha2 = alpha_symbol().pow(2);
  e = substitute(e, SymbolId::param("alphaP"), -alpha2);
  const CoefExpr constraint = alpha2 * lambda2 - CoefExpr(2) * A2;
  if (constraint.is_zero()) return e;
  CoefExpr rem = divide(e, constraint, eliminate).remainder;
  if (eliminate && rem.contains(eliminate))
    throw ConstraintViolated("reduction left eliminated symbols: " + rem.str());
  return rem;
}

CoefExpr solv4_lhs(const CoefExpr& A2) {
  const CoefExpr alpha2 = alpha_symbol().pow(2);
  return partial_derivative(CoefExpr::expf(2), 1) +
         Rational(3, 4) * alpha2 * A2 * partial_derivative(CoefExpr::expf(-2), 1) -
         CoefExpr(2) * alpha2 * CoefExpr::jet({1}).pow(3);
}

CoefExpr solv4_u_form(const CoefExpr& A2) {
  const CoefExpr alpha2 = alpha_symbol().pow(2);
  const CoefExpr u = CoefExpr::param("u");
  const CoefExpr du = CoefExpr::param("du");
  return Rational(1, 4) * alpha2 * du * inverse_monomial(u.pow(3)) *
         (CoefExpr(4) * u.pow(3) - CoefExpr(3) * A2 * inverse_monomial(alpha2) * u - du.pow(2));
}

CoefExpr u_to_jets(const CoefExpr& e) {
  const CoefExpr u = inverse_monomial(alpha_symbol().pow(2)) * CoefExpr::expf(2);
  CoefExpr out = substitute(e, SymbolId::param("du"), CoefExpr(2) * CoefExpr::jet({1}) * u);
  return substitute(out, SymbolId::param("u"), u);
}

std::map<int, Rational> residual_in_profile_constant(const CoefExpr& r, const ExactAssignment& jets,
                                                     const Rational& q) {
  if (q <= 0) throw BadParams("profile scale q must be positive");
  std::map<int, Rational> laurent;
  for (const auto& [k, part] : split_by_expf(r)) {
    if (k % 2 != 0) throw BadParams("odd power of e^f in a residual");
    Rational v = eval_exact(part, jets, std::nullopt);
    // (c q)^{k/2}
    Rational qp = 1;
    for (int i = 0; i < std::abs(k / 2); ++i) qp *= q;
    if (k < 0) qp = 1 / qp;
    laurent[k / 2] += v * qp;
  }
  for (auto it = laurent.begin(); it != laurent.end();) {
    if (it->second == 0)
      it = laurent.erase(it);
    else
      ++it;
  }
  return laurent;
}

std::optional<Rational> solve_two_term(const std::map<int, Rational>& laurent) {
  if (laurent.size() != 2) return std::nullopt;
  auto lo = laurent.begin();
  auto hi = std::next(lo);
  // a c^m + b c^n = 0 with n > m  =>  c^{n-m} = -a / b.
  if (hi->first - lo->first != 1) return std::nullopt;
  Rational c = -lo->second / hi->second;
  c.canonicalize();
  if (c <= 0) return std::nullopt;
  return c;
}

CoefExpr form_norm_sq(const FormExpr& a) {
  CoefExpr s;
  for (const auto& [m, coef] : a.components()) s += coef * coef;
  return s;
}

CoefExpr dilaton_scalar_identity(const CoframeSpec& c, const FormExpr& T, const Rational& k) {
  const auto lc = levi_civita(c);
  const CoefExpr s = scalar_curvature(curvature(lc, c));
  const FormExpr dphi = CoefExpr(k) * c.df();
  const int n = c.dim();
  CoefExpr codiff;  // delta d phi = -sum_i [ebar_i(a_i) - sum_s omega^s_i(ebar_i) a_s]
  for (int i = 1; i <= n; ++i) {
    codiff -= c.frame_derivative(dphi.coeff(mask_of({i})), i);
    for (int s2 = 1; s2 <= n; ++s2)
      codiff += lc(s2, i).coeff(mask_of({i})) * dphi.coeff(mask_of({s2}));
  }
  const CoefExpr T2 = CoefExpr(6) * form_norm_sq(T);
  return s - (CoefExpr(8) * form_norm_sq(dphi) - Rational(1, 12) * T2 - CoefExpr(6) * codiff);
}

}  // namespace het
