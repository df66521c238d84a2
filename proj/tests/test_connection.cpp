#include <doctest.h>

#include "fixture_check.hpp"
#include "hetcalc/anomaly.hpp"
#include "hetcalc/connection.hpp"
#include "hetcalc/errors.hpp"
#include "hetcalc/gstruct.hpp"

using namespace het;

namespace {

FormExpr e(int dim, std::initializer_list<int> legs) { return FormExpr::basis(dim, legs); }
CoefExpr J(std::initializer_list<int> d) { return CoefExpr::jet(d); }

bool all_zero(const FormMatrix& m) {
  for (int i = 1; i <= m.dim(); ++i)
    for (int j = 1; j <= m.dim(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

/// Value at f = 0: drop jet terms, then e^{kf} -> 1.
CoefExpr at_f_zero(const CoefExpr& x) {
  CoefExpr out;
  for (const auto& [k, part] : split_by_expf(drop_terms(x, [](const SymbolId& s) { return s.is_jet(); }))) out += part;
  return out;
}

struct MinusKA {
  CoframeSpec c = build_coframe(FrameId::k_a(symbolic_matrix("a")));
  ConnectionForms lc = levi_civita(c);
  FormExpr T = structure_torsion(c);
  ConnectionForms minus = torsion_connection(lc, T, -1);
};

}  // namespace

TEST_SUITE("connection") {
  TEST_CASE("flat abelian coframe") {
    std::vector<FormExpr> lie(7, FormExpr(7, 2));
    const CoframeSpec flat("flat", 7, lie, {0, 0, 0, 0, 0, 0, 0});
    const auto lc = levi_civita(flat);
    CHECK(all_zero(lc));
    const auto R = curvature(lc, flat);
    CHECK(all_zero(R));
    CHECK(pontryagin4(R).is_zero());
    CHECK(scalar_curvature(R).is_zero());
  }

  TEST_CASE("minus connection reproduces the transcribed table") {
    MinusKA k;
    const auto cmp = testing::compare_with_fixture(k.minus, "ka_minus_connection.txt");
    CHECK(cmp.listed == 18);
    CHECK(cmp.matched == 18);
    CHECK(cmp.unlisted_nonzero == 0);
    // recombination: omega^g = omega^- + T/2
    CHECK(torsion_connection(k.minus, k.T, 1) == k.lc);
    CHECK(k.minus(1, 5) == CoefExpr::expf(-2) * (-CoefExpr::param("a11") * e(7, {2}) - CoefExpr::param("a12") * e(7, {3}) -
                                                  CoefExpr::param("a13") * e(7, {4})));
    CHECK(k.minus(1, 2) == CoefExpr::expf(-1) * (J({2}) * e(7, {1}) - J({1}) * e(7, {2}) + J({4}) * e(7, {3}) -
                                                 J({3}) * e(7, {4})));
  }

  TEST_CASE("curvature reproduces the transcribed table up to one misprint") {
    MinusKA k;
    const auto R = curvature(k.minus, k.c);
    const auto cmp = testing::compare_with_fixture(R, "ka_minus_curvature.txt");
    CHECK(cmp.listed == 21);
    CHECK(cmp.matched == 20);
    CHECK(cmp.unlisted_nonzero == 0);
    REQUIRE(cmp.mismatches.size() == 1);
    const auto& m = cmp.mismatches.front();
    CHECK(m.i == 1);
    CHECK(m.j == 3);
    // the transcribed connection table itself implies the engine value
    const auto Rfix = curvature(testing::connection_from_fixture(7, "ka_minus_connection.txt"), k.c);
    CHECK(Rfix(1, 3) == R(1, 3));
    const Matrix3 A = symbolic_matrix("a");
    CoefExpr X;
    for (std::size_t r = 0; r < 3; ++r) X += A[r][1] * A[r][2];
    CHECK(m.difference == (2 * X * CoefExpr::expf(-4)) * (e(7, {2, 3}) - e(7, {1, 4})));
  }

  TEST_CASE("metricity and first structure equation on K_A") {
    MinusKA k;
    CHECK(all_zero(antisymmetry_defect(k.lc)));
    CHECK(all_zero(antisymmetry_defect(k.minus)));
    for (const auto& r : first_structure_residual(k.lc, k.c)) CHECK(r.is_zero());
    // torsion 2-forms of nabla^- are -i_k T
    const auto tm = first_structure_residual(k.minus, k.c);
    for (int i = 1; i <= 7; ++i) CHECK(tm[static_cast<std::size_t>(i - 1)] == -interior(i, k.T));
    CHECK(all_zero(antisymmetry_defect(curvature(k.minus, k.c))));
  }

  TEST_CASE("curvature entries") {
    MinusKA k;
    const auto R = curvature(k.minus, k.c);
    const Matrix3 A = symbolic_matrix("a");
    auto a = [&](int i, int j) { return A[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; };
    const FormExpr expected =
        CoefExpr(2) * CoefExpr::expf(-4) *
        ((a(1, 2) * a(2, 3) - a(1, 3) * a(2, 2)) * sigma_form(7, 1) - (a(1, 1) * a(2, 3) - a(1, 3) * a(2, 1)) * sigma_form(7, 2) +
         (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * sigma_form(7, 3));
    CHECK(R(5, 6) == expected);
  }

  TEST_CASE("Pontryagin form of the minus connection") {
    MinusKA k;
    const auto p1 = pontryagin4(curvature(k.minus, k.c));
    const CoefExpr A2 = frob_norm_sq(symbolic_matrix("a"));
    const CoefExpr bracket = 8 * (hessian2() + p_laplacian4() - Rational(3, 8) * A2 * flat_laplacian(CoefExpr::expf(-2)));
    // the unbarred volume e^{1234} = e^{-4f} ebar^{1234} makes the identity exact
    CHECK(p1 == (bracket * CoefExpr::expf(-4)) * e(7, {1, 2, 3, 4}));
    CHECK_FALSE(p1 == bracket * e(7, {1, 2, 3, 4}));
  }

  TEST_CASE("D_Lambda") {
    const CoframeSpec c = build_coframe(FrameId::k_a(identity_matrix()));
    const Matrix3 L = rational_matrix({{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}});
    const auto D = build_instanton_DLambda(L, c, true);
    CHECK(D(1, 2) == e(7, {5}));
    CHECK(D(3, 4) == -e(7, {5}));
    CHECK(all_zero(antisymmetry_defect(D)));
    const auto R = curvature(D, c);
    // rank one: 8 pi^2 p1 = -4 |Lambda A|^2 e^{1234}
    CHECK(pontryagin4(R) == (CoefExpr(-4) * CoefExpr::expf(-4)) * e(7, {1, 2, 3, 4}));
    CHECK_THROWS_AS(build_instanton_DLambda(identity_matrix(), c, true), ConstraintViolated);
    CHECK_NOTHROW(build_instanton_DLambda(identity_matrix(), c, false));
  }

  TEST_CASE("D_Lambda constant curvature block") {
    const CoframeSpec c = build_coframe(FrameId::k_a(identity_matrix()));
    const Matrix3 L = symbolic_matrix("l");
    const auto R = curvature(build_instanton_DLambda(L, c), c);
    // part of Omega^1_2 along the fibre 2-forms
    FormExpr fibre(7, 2);
    for (const auto& [m, coef] : R(1, 2).components())
      if ((m & mask_of({1, 2, 3, 4})) == 0) fibre.add(m, coef);
    const FormExpr expected = 2 * lambda_minor(L, 2, 3, 1, 2) * e(7, {5, 6}) +
                              2 * lambda_minor(L, 2, 3, 1, 3) * e(7, {5, 7}) +
                              2 * lambda_minor(L, 2, 3, 2, 3) * e(7, {6, 7});
    CHECK(fibre == expected);
  }

  TEST_CASE("D_B") {
    MinusKA k;
    CHECK(build_DB(symbolic_matrix("a"), k.c) == k.minus);
    const auto DO = build_DB(zero_matrix(), k.c);
    for (int i = 1; i <= 7; ++i)
      for (int j = 5; j <= 7; ++j) CHECK(DO(i, j).is_zero());
    const Matrix3 B = symbolic_matrix("b");
    const auto p1B = pontryagin4(curvature(build_DB(B, k.c), k.c));
    const auto p1m = pontryagin4(curvature(k.minus, k.c));
    const CoefExpr A2 = frob_norm_sq(symbolic_matrix("a")), B2 = frob_norm_sq(B);
    CHECK(p1m - p1B == (-3 * (A2 - B2) * flat_laplacian(CoefExpr::expf(-2)) * CoefExpr::expf(-4)) * e(7, {1, 2, 3, 4}));
  }

  TEST_CASE("scalar curvature at f = 0") {
    const CoframeSpec c = build_coframe(FrameId::k_a(symbolic_matrix("a")));
    const CoefExpr s = at_f_zero(scalar_curvature(curvature(levi_civita(c), c)));
    const FormExpr T = structure_torsion(c);
    // |T|^2 over ordered triples is 6 times the sum over sorted ones
    const CoefExpr T2 = at_f_zero(6 * form_norm_sq(T));
    CHECK(s == Rational(-1, 12) * T2);
    CHECK(s == -frob_norm_sq(symbolic_matrix("a")));
  }

  TEST_CASE("pair symmetry with the closed torsion defect") {
    const CoframeSpec c = build_coframe(FrameId::k_a(rational_matrix({{{1, 2, 0}, {0, 1, -1}, {3, 0, 1}}})));
    const FormExpr T = structure_torsion(c);
    const auto lc = levi_civita(c);
    const auto Rp = curvature(torsion_connection(lc, T, 1), c);
    const auto Rm = curvature(torsion_connection(lc, T, -1), c);
    const FormExpr dT = exterior_derivative(T, c);
    int bad = 0;
    for (int x = 1; x <= 7; ++x)
      for (int y = 1; y <= 7; ++y)
        for (int z = 1; z <= 7; ++z)
          for (int u = 1; u <= 7; ++u)
            if (!(riemann(Rp, x, y, z, u) - riemann(Rm, z, u, x, y) == Rational(1, 2) * evaluate(dT, {x, y, z, u})))
              ++bad;
    CHECK(bad == 0);
  }
}
