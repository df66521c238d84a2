#include "hetcalc/gstruct.hpp"

#include "hetcalc/errors.hpp"

namespace het {

namespace {

FormExpr omegabar(int dim, int i) { return omega_form(dim, i); }

FormExpr e(int dim, std::initializer_list<int> legs) { return FormExpr::basis(dim, legs); }

// Vector of basis coefficients of L(ebar_a).
std::vector<std::pair<int, int>> image(const Endo& L, int a, int dim) {
  std::vector<std::pair<int, int>> out;
  for (int b = 1; b <= dim; ++b)
    if (L[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0)
      out.emplace_back(b, L[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// G2

G2Structure g2_from_form(const CoframeSpec& c, FormExpr theta) {
  if (c.dim() != 7) throw DimensionMismatch("a G2 structure needs a 7-dimensional coframe");
  if (theta.dim() != 7 || theta.degree() != 3) throw DimensionMismatch("G2 form must be a 3-form in dimension 7");
  G2Structure g{c, std::move(theta), FormExpr()};
  g.theta_dual = hodge_star(g.theta);
  return g;
}

G2Structure build_g2(const CoframeSpec& c) {
  if (c.dim() != 7) throw DimensionMismatch("a G2 structure needs a 7-dimensional coframe");
  FormExpr theta = wedge(omegabar(7, 1), e(7, {7})) + wedge(omegabar(7, 2), e(7, {5})) -
                   wedge(omegabar(7, 3), e(7, {6})) + e(7, {5, 6, 7});
  return g2_from_form(c, std::move(theta));
}

G2Residuals check_integrable_pure(const G2Structure& g) {
  const auto& c = g.coframe;
  G2Residuals r;
  r.cocalibrated = exterior_derivative(g.theta_dual, c) - CoefExpr(2) * wedge(c.df(), g.theta_dual);
  r.pure = wedge(exterior_derivative(g.theta, c), g.theta);
  return r;
}

FormExpr lee_form(const G2Structure& g) {
  FormExpr dtheta = exterior_derivative(g.theta, g.coframe);
  return CoefExpr(Rational(-1, 3)) * hodge_star(wedge(hodge_star(dtheta), g.theta));
}

FormExpr torsion_3form(const G2Structure& g) {
  if (!check_integrable_pure(g).pass()) {
    throw NotIntegrable("G2 structure is not co-calibrated of pure type with Lee form 2df");
  }
  FormExpr dtheta = exterior_derivative(g.theta, g.coframe);
  CoefExpr tau = CoefExpr(Rational(1, 6)) * inner(dtheta, g.theta_dual);
  return tau * g.theta - hodge_star(dtheta) + hodge_star(wedge(lee_form(g), g.theta));
}

std::map<Index3, CoefExpr> g2_instanton_residual(const CurvatureForms& curv, const G2Structure& g) {
  std::map<Index3, CoefExpr> out;
  const int n = curv.dim();
  std::vector<FormExpr> slices;
  for (int m = 1; m <= n; ++m) slices.push_back(interior(m, g.theta));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int m = 1; m <= n; ++m) {
        // sum over ordered (k,l) is twice the sum over k < l
        CoefExpr v = CoefExpr(2) * inner(curv(i, j), slices[static_cast<std::size_t>(m - 1)]);
        if (!v.is_zero()) out.emplace(Index3{i, j, m}, std::move(v));
      }
  return out;
}

std::map<int, FormExpr> g2_holonomy_residual(const CurvatureForms& curv, const G2Structure& g) {
  std::map<int, FormExpr> out;
  const int n = curv.dim();
  for (int m = 1; m <= n; ++m) {
    FormExpr acc(n, 2);
    FormExpr slice = interior(m, g.theta);  // Theta(ebar_m, ., .) = Theta(., ., ebar_m)
    for (const auto& [mask, coef] : slice.components()) {
      auto legs = legs_of(mask);
      acc += (CoefExpr(2) * coef) * curv(legs[0], legs[1]);
    }
    if (!acc.is_zero()) out.emplace(m, std::move(acc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SU(2)

SU2Structure build_su2(const CoframeSpec& c) {
  if (c.dim() != 5) throw DimensionMismatch("an SU(2) structure needs a 5-dimensional coframe");
  SU2Structure s{c, e(5, {5}), {omegabar(5, 1), omegabar(5, 2), omegabar(5, 3)}, Endo{}};
  s.psi[2][1] = 1;
  s.psi[1][2] = -1;
  s.psi[4][3] = 1;
  s.psi[3][4] = -1;

  const FormExpr& deta = c.dbar(5);
  FormExpr sd = deta + horizontal_star(deta);
  if (!sd.is_zero()) throw NotAntiSelfDual("d eta has a self-dual part: " + sd.str());
  for (int k = 0; k < 3; ++k) {
    FormExpr r = exterior_derivative(s.omegas[static_cast<std::size_t>(k)], c) -
                 CoefExpr(2) * wedge(c.df(), s.omegas[static_cast<std::size_t>(k)]);
    if (!r.is_zero()) throw NotIntegrable("d omega_" + std::to_string(k + 1) + " != 2 df ^ omega: " + r.str());
  }
  return s;
}

FormExpr dpsi_f(const SU2Structure& s) {
  FormExpr df = s.coframe.df();
  FormExpr out(5, 1);
  for (int a = 1; a <= 5; ++a)
    for (const auto& [b, v] : image(s.psi, a, 5)) out.add(mask_of({a}), CoefExpr(-v) * df.coeff(mask_of({b})));
  return out;
}

FormExpr su2_torsion(const SU2Structure& s) {
  const auto& c = s.coframe;
  return wedge(s.eta, exterior_derivative(s.eta, c)) + CoefExpr(2) * wedge(dpsi_f(s), s.omegas[0]);
}

std::map<std::tuple<int, int, std::string>, CoefExpr> su2_instanton_residual(const CurvatureForms& curv,
                                                                             const SU2Structure& s) {
  std::map<std::tuple<int, int, std::string>, CoefExpr> out;
  const int n = curv.dim();
  const CoefExpr half(Rational(1, 2));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const FormExpr& om = curv(i, j);
      for (int k = 0; k < 3; ++k) {
        CoefExpr v = half * inner(om, s.omegas[static_cast<std::size_t>(k)]);
        if (!v.is_zero()) out.emplace(std::tuple{i, j, "w" + std::to_string(k + 1)}, std::move(v));
      }
      for (int k = 1; k <= 4; ++k) {
        CoefExpr v = om.coeff(mask_of({k, 5}));
        if (!v.is_zero()) out.emplace(std::tuple{i, j, "e" + std::to_string(k) + "5"}, std::move(v));
      }
    }
  return out;
}

std::map<std::string, FormExpr> su2_holonomy_residual(const CurvatureForms& curv, const SU2Structure& s) {
  std::map<std::string, FormExpr> out;
  for (int k = 0; k < 3; ++k) {
    FormExpr acc(5, 2);
    for (const auto& [mask, coef] : s.omegas[static_cast<std::size_t>(k)].components()) {
      auto legs = legs_of(mask);
      acc += (CoefExpr(2) * coef) * curv(legs[0], legs[1]);
    }
    if (!acc.is_zero()) out.emplace("w" + std::to_string(k + 1), std::move(acc));
  }
  for (int j = 1; j <= 4; ++j)
    if (!curv(5, j).is_zero()) out.emplace("v" + std::to_string(j), curv(5, j));
  return out;
}

std::map<std::string, CoefExpr> su2_form_psi_residual(const FormExpr& om, const SU2Structure& s) {
  std::map<std::string, CoefExpr> out;
  auto value = [&](int k, int l) {
    // om(psi ebar_k, psi ebar_l)
    CoefExpr v;
    for (const auto& [a, x] : image(s.psi, k, 5))
      for (const auto& [b, y] : image(s.psi, l, 5)) v += CoefExpr(x * y) * evaluate(om, {a, b});
    return v;
  };
  for (int k = 1; k <= 5; ++k)
    for (int l = k + 1; l <= 5; ++l) {
      CoefExpr r = value(k, l) - evaluate(om, {k, l});
      if (!r.is_zero()) out.emplace("inv:" + std::to_string(k) + std::to_string(l), std::move(r));
    }
  CoefExpr tr;
  for (int k = 1; k <= 5; ++k)
    for (const auto& [b, x] : image(s.psi, k, 5)) tr += CoefExpr(x) * evaluate(om, {k, b});
  if (!tr.is_zero()) out.emplace("trace", std::move(tr));
  return out;
}

// ---------------------------------------------------------------------------
// SU(3)

namespace {

Endo su3_J() {
  Endo J{};
  J[2][1] = 1;
  J[1][2] = -1;
  J[4][3] = 1;
  J[3][4] = -1;
  J[6][5] = 1;
  J[5][6] = -1;
  return J;
}

}  // namespace

SU3Structure build_su3(const CoframeSpec& c) {
  if (c.dim() != 6) throw DimensionMismatch("an SU(3) structure needs a 6-dimensional coframe");
  SU3Structure s{c, omegabar(6, 1) + e(6, {5, 6}),
                 wedge(omegabar(6, 2), e(6, {5})) - wedge(omegabar(6, 3), e(6, {6})),
                 wedge(omegabar(6, 2), e(6, {6})) + wedge(omegabar(6, 3), e(6, {5})), su3_J()};
  return s;
}

SU3Structure su3_from_g2(const G2Structure& g, const CoframeSpec& c6) {
  if (c6.dim() != 6) throw DimensionMismatch("contraction target must be 6-dimensional");
  FormExpr F7 = interior(7, g.theta);
  FormExpr P7 = g.theta - wedge(F7, e(7, {7}));
  SU3Structure s{c6, truncate_legs(F7, 6), truncate_legs(P7, 6), FormExpr(), su3_J()};
  // Psi- = *_6 Psi+ in the orientation ebar^{123456}
  s.psi_minus = hodge_star(s.psi_plus);
  return s;
}

SU3Residuals check_su3(const SU3Structure& s) {
  const auto& c = s.coframe;
  FormExpr df = c.df();
  FormExpr FF = wedge(s.F, s.F);
  SU3Residuals r;
  r.FF = exterior_derivative(FF, c) - CoefExpr(2) * wedge(df, FF);
  r.psi_plus = exterior_derivative(s.psi_plus, c) - CoefExpr(2) * wedge(df, s.psi_plus);
  r.psi_minus = exterior_derivative(s.psi_minus, c) - CoefExpr(2) * wedge(df, s.psi_minus);
  return r;
}

FormExpr pullback3(const FormExpr& a, const Endo& L) {
  const int n = a.dim();
  FormExpr out(n, 3);
  for (int x = 1; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y)
      for (int z = y + 1; z <= n; ++z) {
        CoefExpr v;
        for (const auto& [p, s1] : image(L, x, n))
          for (const auto& [q, s2] : image(L, y, n))
            for (const auto& [r, s3] : image(L, z, n)) v += CoefExpr(s1 * s2 * s3) * evaluate(a, {p, q, r});
        out.add(mask_of({x, y, z}), v);
      }
  return out;
}

FormExpr su3_torsion(const SU3Structure& s) {
  return -pullback3(exterior_derivative(s.F, s.coframe), s.J);
}

FormExpr structure_torsion(const CoframeSpec& c) {
  switch (c.dim()) {
    case 7: return torsion_3form(build_g2(c));
    case 6: return su3_torsion(build_su3(c));
    case 5: return su2_torsion(build_su2(c));
    default: throw DimensionMismatch("no structure torsion in dimension " + std::to_string(c.dim()));
  }
}

}  // namespace het
