#include <doctest.h>

#include <cmath>

#include "hetcalc/diffring.hpp"
#include "hetcalc/errors.hpp"
#include "hetcalc/profiles.hpp"
#include "random_forms.hpp"

using namespace het;

namespace {

CoefExpr J(std::initializer_list<int> d) { return CoefExpr::jet(d); }

Assignment identity_hessian() {
  Assignment a;
  for (int i = 1; i <= 4; ++i)
    for (int j = i; j <= 4; ++j) a[SymbolId::jet({i, j})] = i == j ? 1.0 : 0.0;
  return a;
}

}  // namespace

TEST_SUITE("diffring") {
  TEST_CASE("partial derivatives") {
    CHECK(partial_derivative(J({2}), 1) == J({1, 2}));
    CHECK(partial_derivative(CoefExpr::expf(2), 1) == 2 * J({1}) * CoefExpr::expf(2));
    const CoefExpr e = CoefExpr::param("a12") * CoefExpr::expf(-2) * J({4});
    CHECK(partial_derivative(e, 3) ==
          CoefExpr::param("a12") * CoefExpr::expf(-2) * (J({3, 4}) - 2 * J({3}) * J({4})));
    CHECK(partial_derivative(CoefExpr::param("b"), 2).is_zero());
    CHECK(partial_derivative(J({1}), 6).is_zero());
    CHECK_THROWS_AS(partial_derivative(J({1, 2, 3}), 4), JetOrderExceeded);
  }

  TEST_CASE("jets are symmetric and ExpF normalises") {
    CHECK(J({2, 1}) == J({1, 2}));
    CHECK(CoefExpr::expf(2) * CoefExpr::expf(-2) == CoefExpr(1));
    CHECK(CoefExpr::expf(0) == CoefExpr(1));
    CHECK(CoefExpr::expf(1) * CoefExpr::expf(3) == CoefExpr::expf(4));
  }

  TEST_CASE("flat laplacian") {
    CoefExpr lap_f, grad;
    for (int i = 1; i <= 4; ++i) {
      lap_f += J({i, i});
      grad += J({i}) * J({i});
    }
    CHECK(flat_laplacian(CoefExpr::expf(2)) == CoefExpr::expf(2) * (2 * lap_f + 4 * grad));
    CHECK(flat_laplacian(CoefExpr::expf(-2)) == CoefExpr::expf(-2) * (-2 * lap_f + 4 * grad_norm_sq()));

    // ball profile with |A|^2 = 4: Delta e^{2f} = -8 everywhere inside
    auto ball = ball_profile(Rational(4));
    for (Point x : {Point{0, 0, 0, 0}, Point{0.3, -0.2, 0.1, 0.4}}) {
      CHECK(eval(flat_laplacian(CoefExpr::expf(2)), jet_assignment(ball->jets(x))) == doctest::Approx(-8.0));
    }
    // |x|^{-2} is harmonic away from the origin
    auto fund = fundamental_profile(Rational(1), RationalPoint{});
    CHECK(std::abs(eval(flat_laplacian(CoefExpr::expf(2)), jet_assignment(fund->jets({1, 0, 0, 0})))) < 1e-13);
  }

  TEST_CASE("2-Hessian") {
    // one variable
    CoefExpr h = hessian2();
    auto one_var = [](const SymbolId& s) {
      for (int k = 0; k < s.order(); ++k)
        if (s.dir(k) != 1) return true;
      return false;
    };
    CHECK(drop_terms(h, one_var).is_zero());
    auto two_var = [](const SymbolId& s) {
      for (int k = 0; k < s.order(); ++k)
        if (s.dir(k) > 2) return true;
      return false;
    };
    CHECK(drop_terms(h, two_var) == J({1, 1}) * J({2, 2}) - J({1, 2}) * J({1, 2}));
    CHECK(eval(h, identity_hessian()) == 6.0);
  }

  TEST_CASE("4-Laplacian") {
    auto one_var = [](const SymbolId& s) {
      for (int k = 0; k < s.order(); ++k)
        if (s.dir(k) != 1) return true;
      return false;
    };
    CHECK(drop_terms(p_laplacian4(), one_var) == 3 * J({1}) * J({1}) * J({1, 1}));
    CHECK(drop_terms(p_laplacian4(), [](const SymbolId& s) { return s.order() == 2; }).is_zero());
    CoefExpr expected;
    for (int i = 1; i <= 4; ++i) {
      expected += grad_norm_sq() * J({i, i});
      for (int j = 1; j <= 4; ++j) expected += 2 * J({j}) * J({i, j}) * J({i});
    }
    CHECK(p_laplacian4() == expected);
  }

  TEST_CASE("evaluation") {
    Assignment a{{SymbolId::jet({}), 0.0}, {SymbolId::jet({1}), 3.0}};
    CHECK(eval(2 * J({1}) * CoefExpr::expf(2), a) == 6.0);
    CHECK_THROWS_AS(eval(J({2}), a), UnboundSymbol);
    auto ball = ball_profile(Rational(4));
    CHECK(eval(flat_laplacian(CoefExpr::expf(2)), jet_assignment(ball->jets({0, 0, 0, 0}))) == doctest::Approx(-8.0));
  }

  TEST_CASE("canonical form and commuting partials, randomized") {
    testing::RandomForms rf(11);
    for (int n = 0; n < 200; ++n) {
      const CoefExpr a = rf.coefficient(), b = rf.coefficient(), c = rf.coefficient();
      CHECK(a + b == b + a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      const int i = rf.uniform(1, 4), j = rf.uniform(1, 4);
      CHECK(partial_derivative(partial_derivative(a, i), j) == partial_derivative(partial_derivative(a, j), i));
      CHECK(partial_derivative(a * b, i) == partial_derivative(a, i) * b + a * partial_derivative(b, i));
    }
  }

  TEST_CASE("exact arithmetic") {
    const Rational third(1, 3);
    CoefExpr s;
    for (int k = 0; k < 3; ++k) s += third;
    CHECK(s == CoefExpr(1));
    CHECK((CoefExpr::param("b") - CoefExpr::param("b")).is_zero());
    CHECK(CoefExpr::expf(2) * CoefExpr::expf(-2) == CoefExpr(1));
  }

  TEST_CASE("division and substitution") {
    const CoefExpr x = CoefExpr::param("x"), y = CoefExpr::param("y");
    auto q = exact_quotient((x + y) * (x - y), x - y);
    REQUIRE(q.has_value());
    CHECK(*q == x + y);
    CHECK_FALSE(exact_quotient(x * x + 1, x - y).has_value());
    CHECK(substitute(x * x * y, SymbolId::param("x"), y + 1) == (y + 1) * (y + 1) * y);
    auto parts = split_by_expf(CoefExpr::expf(2) * x + CoefExpr::expf(-2) * y + 3);
    CHECK(parts.at(2) == x);
    CHECK(parts.at(-2) == y);
    CHECK(parts.at(0) == CoefExpr(3));
  }
}
