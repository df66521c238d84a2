#pragma once

// G2, SU(3) and SU(2) structures on the conformal K_A coframes, their
// intrinsic torsion 3-forms and instanton conditions.
//
// Barred forms: omegabar_i = e^{2f} omega_i and sigmabar_i = e^{2f} sigma_i,
// i.e. omega_i and sigma_i written with ebar^1..ebar^4.

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "hetcalc/connection.hpp"

namespace het {

struct G2Structure {
  CoframeSpec coframe;
  FormExpr theta;       // Thetabar
  FormExpr theta_dual;  // *Thetabar
};

/// Thetabar = omegabar_1 ^ ebar^7 + omegabar_2 ^ ebar^5 - omegabar_3 ^ ebar^6 + ebar^567.
G2Structure build_g2(const CoframeSpec& c);
/// G2 structure from an explicit 3-form (used to probe broken compatibility).
G2Structure g2_from_form(const CoframeSpec& c, FormExpr theta);

struct G2Residuals {
  FormExpr cocalibrated;  // d*Theta - 2 df ^ *Theta
  FormExpr pure;          // dTheta ^ Theta
  bool pass() const { return cocalibrated.is_zero() && pure.is_zero(); }
};

G2Residuals check_integrable_pure(const G2Structure& g);

/// Lee form -(1/3) *( *dTheta ^ Theta ).
FormExpr lee_form(const G2Structure& g);

/// T = (1/6)(dTheta, *Theta) Theta - *dTheta + *(theta ^ Theta).
/// Throws NotIntegrable when check_integrable_pure fails.
FormExpr torsion_3form(const G2Structure& g);

/// Component index (i, j, m) with i < j.
using Index3 = std::tuple<int, int, int>;

/// sum_{k,l} Omega^i_j(ebar_k, ebar_l) Theta(ebar_k, ebar_l, ebar_m), nonzero entries only.
std::map<Index3, CoefExpr> g2_instanton_residual(const CurvatureForms& curv, const G2Structure& g);

/// sum_{i,j} Omega^i_j(X, Y) Theta(ebar_i, ebar_j, ebar_m) as 2-forms in (X, Y):
/// the curvature takes values in g2 iff all vanish. Nonzero m only.
std::map<int, FormExpr> g2_holonomy_residual(const CurvatureForms& curv, const G2Structure& g);

// ---------------------------------------------------------------------------
// SU(2) in dimension 5

/// Linear map on basis vectors: psi[a][b] = ebar^b(psi ebar_a), 1-based with index 0 unused.
using Endo = std::array<std::array<int, 8>, 8>;

struct SU2Structure {
  CoframeSpec coframe;
  FormExpr eta;                    // ebar^5
  std::array<FormExpr, 3> omegas;  // omegabar_1..3
  Endo psi;                        // F(X,Y) = g(X, psi Y) with F = omegabar_1
};

/// Checks d omegabar_s = 2 df ^ omegabar_s and *_H d eta = -d eta.
/// Throws NotAntiSelfDual if d eta has a self-dual part, NotIntegrable if the
/// omega relations fail, DimensionMismatch unless dim is 5.
SU2Structure build_su2(const CoframeSpec& c);

/// d^psi f(X) = -df(psi X).
FormExpr dpsi_f(const SU2Structure& s);
/// eta ^ d eta + 2 d^psi f ^ F.
FormExpr su2_torsion(const SU2Structure& s);

/// For each entry (i, j), i < j, the components of Omega^i_j along
/// omegabar_1..3 (labels "w1".."w3") and along ebar^k ^ ebar^5 (labels "e15".."e45").
/// Nonzero entries only.
std::map<std::tuple<int, int, std::string>, CoefExpr> su2_instanton_residual(const CurvatureForms& curv,
                                                                             const SU2Structure& s);

/// Holonomy in su(2): sum_{i,j} Omega^i_j omegabar_s(ebar_i, ebar_j) for s = 1..3
/// (labels "w1".."w3") and Omega^5_j (labels "v1".."v4"), as 2-forms. Nonzero only.
std::map<std::string, FormExpr> su2_holonomy_residual(const CurvatureForms& curv, const SU2Structure& s);

/// Direct psi-invariance and trace residuals: Omega(psi X, psi Y) - Omega(X, Y)
/// on basis pairs (labels "inv:kl") and sum_k Omega(ebar_k, psi ebar_k) ("trace").
std::map<std::string, CoefExpr> su2_form_psi_residual(const FormExpr& omega2, const SU2Structure& s);

// ---------------------------------------------------------------------------
// SU(3) in dimension 6

struct SU3Structure {
  CoframeSpec coframe;
  FormExpr F;          // omegabar_1 + ebar^56
  FormExpr psi_plus;   // omegabar_2 ^ ebar^5 - omegabar_3 ^ ebar^6
  FormExpr psi_minus;  // omegabar_2 ^ ebar^6 + omegabar_3 ^ ebar^5
  Endo J;              // F(X,Y) = g(X, J Y)
};

SU3Structure build_su3(const CoframeSpec& c);
/// The SU(3) forms obtained from a 7D G2 structure with ebar^7 contracted away:
/// F = i_{e7} Theta and Psi+ = Theta - F ^ ebar^7, truncated to dimension 6.
SU3Structure su3_from_g2(const G2Structure& g, const CoframeSpec& c6);

struct SU3Residuals {
  FormExpr FF;         // d(F^F) - 2 df ^ F ^ F
  FormExpr psi_plus;   // dPsi+ - 2 df ^ Psi+
  FormExpr psi_minus;  // dPsi- - 2 df ^ Psi-
  bool pass() const { return FF.is_zero() && psi_plus.is_zero() && psi_minus.is_zero(); }
};

SU3Residuals check_su3(const SU3Structure& s);

/// Bismut torsion T(X,Y,Z) = -dF(JX, JY, JZ).
FormExpr su3_torsion(const SU3Structure& s);

/// The skew torsion of the natural structure for the coframe dimension:
/// G2 (7), SU(3) (6) or SU(2) (5).
FormExpr structure_torsion(const CoframeSpec& c);

/// a(L X, L Y, L Z) on basis vectors for a linear map L.
FormExpr pullback3(const FormExpr& a, const Endo& L);

}  // namespace het
