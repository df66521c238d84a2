#pragma once

// Anomaly cancellation dT = (alpha'/4)(p1(nabla^-) - p1(D)) on conformal K_A
// coframes, its reduction to one variable, and the dilaton scalar identity.

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "hetcalc/gstruct.hpp"

namespace het {

/// The string parameter alpha' as a symbol ("alphaP").
CoefExpr alpha_prime();
/// The parameter alpha with alpha' = -alpha^2 on the negative branch.
CoefExpr alpha_symbol();

struct Instanton {
  enum class Kind { DLambda, DB };
  Kind kind = Kind::DLambda;
  Matrix3 matrix = zero_matrix();

  static Instanton d_lambda(Matrix3 Lambda) { return {Kind::DLambda, std::move(Lambda)}; }
  static Instanton d_b(Matrix3 B) { return {Kind::DB, std::move(B)}; }
  std::string name() const { return kind == Kind::DLambda ? "D_Lambda" : "D_B"; }
};

/// D_Lambda requires rank <= 1 (throws ConstraintViolated otherwise).
ConnectionForms build_instanton(const Instanton& inst, const CoframeSpec& c);

struct AnomalyTerms {
  FormExpr T;         // torsion 3-form of the natural structure
  FormExpr dT;
  FormExpr p1_minus;  // 8 pi^2 p1(nabla^-)
  FormExpr p1_inst;   // 8 pi^2 p1(D)
  FormExpr defect;    // dT - (alpha'/4)(p1_minus - p1_inst)
  /// r with defect = -r e^{-4f} ebar^{1234}.
  CoefExpr residual;
};

/// Throws ConstraintViolated when the defect has components off ebar^{1234}.
AnomalyTerms anomaly_terms(const CoframeSpec& c, const CoefExpr& alphaP, const Instanton& inst);
CoefExpr anomaly_residual(const CoframeSpec& c, const CoefExpr& alphaP, const Instanton& inst);

/// Delta e^{2f} + 2|A|^2 + (alpha'/4)[8 F2 + 8 Delta_4 f - 3|A|^2 Delta e^{-2f} + 4|Lambda A|^2].
CoefExpr expected_residual_DLambda(const CoefExpr& A2, const CoefExpr& LA2, const CoefExpr& alphaP);
/// Delta e^{2f} + 2|A|^2 - (3 alpha'/4)(|A|^2 - |B|^2) Delta e^{-2f}.
CoefExpr expected_residual_DB(const CoefExpr& A2, const CoefExpr& B2, const CoefExpr& alphaP);

/// Restriction to f = f(x^1): jets with a direction other than 1 vanish,
/// alpha' = -alpha^2, and the result is reduced modulo
/// alpha^2 lambda^2 - 2|A|^2 with `eliminate` symbols ranked highest.
/// Throws ConstraintViolated when eliminated symbols survive the reduction.
CoefExpr reduce_onevar(const CoefExpr& r, const CoefExpr& A2, const CoefExpr& lambda2,
                       const std::function<bool(const SymbolId&)>& eliminate = {});

/// d_1 e^{2f} + (3/4) alpha^2 |A|^2 d_1 e^{-2f} - 2 alpha^2 f_1^3, whose
/// x^1-derivative is the reduced residual; the first integral sets it to C0.
CoefExpr solv4_lhs(const CoefExpr& A2);

/// (alpha^2 u' / (4 u^3)) (4 u^3 - 3 (|A|^2 / alpha^2) u - u'^2) in the
/// parameters "u" and "du".
CoefExpr solv4_u_form(const CoefExpr& A2);
/// Replaces u by alpha^{-2} e^{2f} and du by its x^1-derivative.
CoefExpr u_to_jets(const CoefExpr& e);

/// For e^{2f} = c q(x) with q known at a point, the residual is a Laurent
/// polynomial in c. Returns its coefficients (power of c -> value) from exact
/// jets at that point.
std::map<int, Rational> residual_in_profile_constant(const CoefExpr& r, const ExactAssignment& jets, const Rational& q);
/// The positive root of a Laurent polynomial with at most two nonzero
/// coefficients; nullopt when there is none.
std::optional<Rational> solve_two_term(const std::map<int, Rational>& laurent);

/// s - [8 |d phi|^2 - (1/12)|T|^2 - 6 delta d phi] for phi = k f, with s the
/// scalar curvature of the Levi-Civita connection and |T|^2 summed over
/// ordered index triples.
CoefExpr dilaton_scalar_identity(const CoframeSpec& c, const FormExpr& T, const Rational& k);

/// Squared norm of a form over sorted index sets.
CoefExpr form_norm_sq(const FormExpr& a);

}  // namespace het
