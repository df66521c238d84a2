#pragma once

// Exact differential coefficient ring.
//
// A CoefExpr is a finite sum of rational multiples of monomials. A monomial is
// a product of powers of constant parameters (a11, b, alphaP, ...), jets of the
// dilaton f (f, f_i, f_ij, f_ijk) and a single integer power of e^f. All
// coefficients are arbitrary precision rationals, so two expressions are equal
// exactly when their canonical term lists coincide.
//
// Monomial order (used for storage and printing): factors are compared
// lexicographically on (kind tag, name or jet indices, exponent); the e^{kf}
// exponent is compared last.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace het {

using Rational = mpq_class;

/// Maximum order of a dilaton jet that may appear in an expression.
inline constexpr int kMaxJetOrder = 3;

class SymbolId {
 public:
  enum class Kind : std::uint8_t { Param = 0, Jet = 1 };

  /// Constant parameter; the name is at most 15 characters.
  static SymbolId param(std::string_view name);
  /// Jet of f with the given partial-derivative directions (1..4), any order.
  /// An empty list denotes f itself.
  static SymbolId jet(std::initializer_list<int> dirs);
  static SymbolId jet(std::span<const int> dirs);

  Kind kind() const { return kind_; }
  bool is_param() const { return kind_ == Kind::Param; }
  bool is_jet() const { return kind_ == Kind::Jet; }
  int order() const { return order_; }
  /// k-th derivative direction of a jet, 0 <= k < order().
  int dir(int k) const { return idx_[static_cast<std::size_t>(k)]; }
  std::string_view name() const;
  std::string str() const;

  friend auto operator<=>(const SymbolId&, const SymbolId&) = default;
  friend bool operator==(const SymbolId&, const SymbolId&) = default;

 private:
  Kind kind_ = Kind::Param;
  std::uint8_t order_ = 0;
  std::array<std::uint8_t, 3> idx_{};
  std::array<char, 16> name_{};
};

struct Monomial {
  /// Sorted by symbol, exponents never zero.
  std::vector<std::pair<SymbolId, int>> factors;
  /// Power k of e^{kf}.
  int expf = 0;

  int exponent(const SymbolId& s) const;
  bool is_one() const { return factors.empty() && expf == 0; }
  std::string str() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

/// Numeric values for symbols. ExpF(k) evaluates as exp(k * value(f)).
using Assignment = std::map<SymbolId, double>;
using ExactAssignment = std::map<SymbolId, Rational>;

class CoefExpr {
 public:
  CoefExpr() = default;
  CoefExpr(long value);  // NOLINT(google-explicit-constructor)
  CoefExpr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static CoefExpr param(std::string_view name);
  static CoefExpr jet(std::initializer_list<int> dirs);
  static CoefExpr symbol(const SymbolId& s, int power = 1);
  /// e^{k f}
  static CoefExpr expf(int k);
  static CoefExpr monomial(Monomial m, Rational coef = 1);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when the expression is a plain rational number.
  bool is_constant() const;
  /// Value of a constant expression; throws if not constant.
  Rational constant_value() const;
  /// True when any monomial contains a symbol matching the predicate.
  bool contains(const std::function<bool(const SymbolId&)>& pred) const;
  bool contains(const SymbolId& s) const;
  /// Largest jet order appearing in the expression.
  int max_jet_order() const;
  std::size_t size() const { return terms_.size(); }

  CoefExpr& operator+=(const CoefExpr& o);
  CoefExpr& operator-=(const CoefExpr& o);
  CoefExpr& operator*=(const CoefExpr& o);
  friend CoefExpr operator+(CoefExpr a, const CoefExpr& b) { return a += b; }
  friend CoefExpr operator-(CoefExpr a, const CoefExpr& b) { return a -= b; }
  friend CoefExpr operator*(const CoefExpr& a, const CoefExpr& b);
  friend CoefExpr operator-(const CoefExpr& a);
  friend bool operator==(const CoefExpr& a, const CoefExpr& b);

  CoefExpr pow(int n) const;
  std::string str() const;

 private:
  static CoefExpr from_sorted(std::vector<Term> terms);
  std::vector<Term> terms_;
};

/// d/dx^i. Directions 5..7 give zero (coefficients depend on x^1..x^4 only).
CoefExpr partial_derivative(const CoefExpr& e, int i);
/// Sum of the four pure second partials.
CoefExpr flat_laplacian(const CoefExpr& e);
/// |grad f|^2 = sum f_i^2
CoefExpr grad_norm_sq();
/// Sum of the principal 2x2 minors of the Hessian of f.
CoefExpr hessian2();
/// div(|grad f|^2 grad f), expanded in jets.
CoefExpr p_laplacian4();

double eval(const CoefExpr& e, const Assignment& values);
/// Value together with the sum of absolute term values (a natural scale for
/// relative residuals).
std::pair<double, double> eval_with_scale(const CoefExpr& e, const Assignment& values);
/// Exact evaluation. ExpF(k) requires k even and uses (e^{2f})^{k/2}.
Rational eval_exact(const CoefExpr& e, const ExactAssignment& values,
                    const std::optional<Rational>& e2f);

/// Replaces every occurrence of `s` by `value`. Negative powers of `s` require
/// `value` to be a single monomial.
CoefExpr substitute(const CoefExpr& e, const SymbolId& s, const CoefExpr& value);
/// Drops every term containing a symbol matching the predicate.
CoefExpr drop_terms(const CoefExpr& e, const std::function<bool(const SymbolId&)>& pred);
/// Groups terms by their e^{kf} exponent; the grouped parts carry no e^{kf} factor.
std::map<int, CoefExpr> split_by_expf(const CoefExpr& e);
/// Inverse of a single-term expression.
CoefExpr inverse_monomial(const CoefExpr& e);

struct DivisionResult {
  CoefExpr quotient;
  CoefExpr remainder;
};

/// Multivariate division by a single divisor. Terms are ordered by
/// (number of `eliminate` symbols, total degree, canonical order), with e^{kf}
/// treated as a unit. When `den` divides `num` the remainder is zero.
DivisionResult divide(const CoefExpr& num, const CoefExpr& den,
                      const std::function<bool(const SymbolId&)>& eliminate = {});
/// Exact quotient num/den, or nullopt when den does not divide num.
std::optional<CoefExpr> exact_quotient(const CoefExpr& num, const CoefExpr& den);

}  // namespace het
