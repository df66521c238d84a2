#include <doctest.h>

#include "hetcalc/errors.hpp"
#include "hetcalc/exterior.hpp"
#include "hetcalc/frames.hpp"
#include "hetcalc/gstruct.hpp"
#include "random_forms.hpp"

using namespace het;

namespace {

FormExpr e(int dim, std::initializer_list<int> legs) { return FormExpr::basis(dim, legs); }
CoefExpr J(std::initializer_list<int> d) { return CoefExpr::jet(d); }

}  // namespace

TEST_SUITE("exterior") {
  TEST_CASE("wedge signs") {
    CHECK(wedge(e(7, {1}), e(7, {2})) == e(7, {1, 2}));
    CHECK(wedge(e(7, {2}), e(7, {1})) == -e(7, {1, 2}));
    CHECK(wedge(e(7, {1}), e(7, {1})).is_zero());
    CHECK(FormExpr::basis(7, {3, 1, 2}) == e(7, {1, 2, 3}));
    CHECK(FormExpr::basis(7, {2, 1, 3}) == -e(7, {1, 2, 3}));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) CHECK(wedge(sigma_form(7, i), omega_form(7, j)).is_zero());
    CHECK(wedge(omega_form(7, 1), omega_form(7, 1)) == 2 * e(7, {1, 2, 3, 4}));
    CHECK_THROWS_AS(wedge(e(7, {1}), e(5, {2})), DimensionMismatch);
  }

  TEST_CASE("coframe differentials on K_A") {
    const Matrix3 A = symbolic_matrix("a");
    const CoframeSpec c = build_coframe(FrameId::k_a(A));
    FormExpr expected(7, 2);
    for (int j = 0; j < 3; ++j) expected += A[0][static_cast<std::size_t>(j)] * sigma_form(7, j + 1);
    CHECK(c.dbar(5) == CoefExpr::expf(-2) * expected);
    const FormExpr de1 = -(CoefExpr::expf(-1) * (J({2}) * e(7, {1, 2}) + J({3}) * e(7, {1, 3}) + J({4}) * e(7, {1, 4})));
    CHECK(c.dbar(1) == de1);
    CHECK(exterior_derivative(c.dbar(5), c).is_zero());
  }

  TEST_CASE("coframe differentials on h(2,1)") {
    const CoefExpr a1 = CoefExpr::param("b1"), a2 = CoefExpr::param("b2"), a3 = CoefExpr::param("b3");
    const CoframeSpec c = build_coframe(FrameId::h21(a1, a2, a3));
    CHECK(c.dim() == 5);
    CHECK(c.dbar(5) ==
          CoefExpr::expf(-2) * (a1 * sigma_form(5, 1) + a2 * sigma_form(5, 2) + a3 * sigma_form(5, 3)));
  }

  TEST_CASE("exterior derivative identities on K_A") {
    const CoframeSpec c = build_coframe(FrameId::k_a(symbolic_matrix("a")));
    const G2Structure g = build_g2(c);
    CHECK((exterior_derivative(g.theta_dual, c) - wedge(c.df(), g.theta_dual)).is_zero() == false);
    CHECK((exterior_derivative(g.theta_dual, c) - 2 * wedge(c.df(), g.theta_dual)).is_zero());
    const FormExpr T = torsion_3form(g);
    const FormExpr dT = exterior_derivative(T, c);
    const CoefExpr A2 = frob_norm_sq(symbolic_matrix("a"));
    CHECK(dT == -((flat_laplacian(CoefExpr::expf(2)) + 2 * A2) * CoefExpr::expf(-4)) * e(7, {1, 2, 3, 4}));
  }

  TEST_CASE("hodge star") {
    CHECK(hodge_star(e(7, {1, 2, 3, 4})) == e(7, {5, 6, 7}));
    CHECK(hodge_star(e(4, {1, 2})) == e(4, {3, 4}));
    const CoframeSpec c = build_coframe(FrameId::k_a(identity_matrix()));
    const G2Structure g = build_g2(c);
    // omega_1 ^ e^56 + omega_2 ^ e^67 + omega_3 ^ e^57 in barred form, plus (1/2) omega_1 ^ omega_1
    const FormExpr expected = wedge(omega_form(7, 1), e(7, {5, 6})) + wedge(omega_form(7, 2), e(7, {6, 7})) +
                              wedge(omega_form(7, 3), e(7, {5, 7})) +
                              Rational(1, 2) * wedge(omega_form(7, 1), omega_form(7, 1));
    CHECK(g.theta_dual == expected);
    CHECK(hodge_star(g.theta) == g.theta_dual);
  }

  TEST_CASE("star squared and inner products") {
    testing::RandomForms rf(5);
    for (int dim : {5, 6, 7}) {
      for (int p = 0; p <= dim; ++p) {
        const FormExpr a = rf.form(dim, p);
        const int sign = (dim == 6 && (p * (6 - p)) % 2 == 1) ? -1 : 1;
        CHECK(hodge_star(hodge_star(a)) == CoefExpr(sign) * a);
        // <a,a> vol = a ^ *a
        FormExpr vol(dim, dim);
        std::vector<int> all;
        for (int k = 1; k <= dim; ++k) all.push_back(k);
        vol = FormExpr::basis(dim, std::span<const int>(all), inner(a, a));
        CHECK(wedge(a, hodge_star(a)) == vol);
      }
    }
  }

  TEST_CASE("interior and evaluation") {
    const FormExpr a = e(7, {1, 2, 5});
    CHECK(interior(1, a) == e(7, {2, 5}));
    CHECK(interior(2, a) == -e(7, {1, 5}));
    CHECK(interior(3, a).is_zero());
    CHECK(evaluate(a, {2, 1, 5}) == CoefExpr(-1));
    CHECK(evaluate(a, {1, 2, 5}) == CoefExpr(1));
  }

  TEST_CASE("lie-level integrability of a corrupted coframe") {
    std::vector<FormExpr> lie(7, FormExpr(7, 2));
    lie[0] = e(7, {2, 3});
    lie[4] = e(7, {1, 5});
    const auto r = lie_d_squared(lie);
    CHECK(r[4] == e(7, {2, 3, 5}));
    CHECK_THROWS_AS(CoframeSpec("bad", 7, lie, {1, 1, 1, 1, 0, 0, 0}), NotIntegrable);
  }
}
