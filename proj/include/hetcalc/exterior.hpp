#pragma once

// Exterior algebra on an orthonormal barred coframe {ebar^1, ..., ebar^dim}.
//
// Forms are stored as maps from index subsets (bit masks, bit k-1 <-> leg k)
// to CoefExpr coefficients. All tensors are expressed in the barred basis;
// unbarred objects carry explicit powers of e^f (e.g. e^{1234} is
// e^{-4f} ebar^{1234}).

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hetcalc/diffring.hpp"

namespace het {

using Mask = std::uint32_t;

inline constexpr int kMaxDim = 7;

Mask mask_of(std::initializer_list<int> legs);
std::vector<int> legs_of(Mask m);
int popcount(Mask m);

class FormExpr {
 public:
  FormExpr() = default;
  FormExpr(int dim, int degree);

  /// coef * ebar^{i1} ^ ... ^ ebar^{ip}; indices in any order (sign applied),
  /// repeated indices give zero.
  static FormExpr basis(int dim, std::initializer_list<int> legs, const CoefExpr& coef = 1);
  static FormExpr basis(int dim, std::span<const int> legs, const CoefExpr& coef = 1);
  static FormExpr scalar(int dim, const CoefExpr& value);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::map<Mask, CoefExpr>& components() const { return comps_; }
  /// Coefficient of ebar^I for the sorted index set I (zero when absent).
  CoefExpr coeff(Mask m) const;
  CoefExpr coeff(std::initializer_list<int> sorted_legs) const;
  void add(Mask m, const CoefExpr& c);
  bool is_zero() const { return comps_.empty(); }

  FormExpr& operator+=(const FormExpr& o);
  FormExpr& operator-=(const FormExpr& o);
  friend FormExpr operator+(FormExpr a, const FormExpr& b) { return a += b; }
  friend FormExpr operator-(FormExpr a, const FormExpr& b) { return a -= b; }
  friend FormExpr operator-(const FormExpr& a);
  friend FormExpr operator*(const CoefExpr& c, const FormExpr& a);
  friend bool operator==(const FormExpr& a, const FormExpr& b);

  /// Applies `fn` to every coefficient, dropping zeros.
  template <typename Fn>
  FormExpr map_coeffs(Fn&& fn) const {
    FormExpr out(dim_, degree_);
    for (const auto& [m, c] : comps_) out.add(m, fn(c));
    return out;
  }

  std::string str() const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<Mask, CoefExpr> comps_;
};

/// Sign of the shuffle that merges disjoint sorted index sets a and b.
int merge_sign(Mask a, Mask b);

FormExpr wedge(const FormExpr& a, const FormExpr& b);
/// *(ebar^I) = sign(I, I^c) ebar^{I^c}.
FormExpr hodge_star(const FormExpr& a);
/// Hodge star of the span of legs 1..4 (the horizontal space), for forms whose
/// components only involve those legs.
FormExpr horizontal_star(const FormExpr& a);
/// Interior product with the dual basis vector ebar_k.
FormExpr interior(int k, const FormExpr& a);
/// a(ebar_{v1}, ..., ebar_{vp}).
CoefExpr evaluate(const FormExpr& a, std::span<const int> vectors);
CoefExpr evaluate(const FormExpr& a, std::initializer_list<int> vectors);
/// Pointwise inner product sum_I a_I b_I of forms of equal degree.
CoefExpr inner(const FormExpr& a, const FormExpr& b);
/// Drops every component touching a leg > new_dim and moves to dimension new_dim.
FormExpr truncate_legs(const FormExpr& a, int new_dim);
/// Embeds a form into a larger dimension.
FormExpr extend_legs(const FormExpr& a, int new_dim);

/// A Lie coframe with conformal weights: e^k are left-invariant with
/// d e^k = sum_{i<j} c^k_ij e^{ij}, and ebar^k = e^{w_k f} e^k. The
/// differentials of the barred coframe and of every barred basis form are
/// computed once at construction and read immutably afterwards.
class CoframeSpec {
 public:
  /// `lie_differentials[k-1]` is d e^k written in the unbarred basis with
  /// constant coefficients (parameters allowed, no jets). Throws NotIntegrable
  /// when d(d e^k) != 0 and `check` is set.
  CoframeSpec(std::string name, int dim, std::vector<FormExpr> lie_differentials,
              std::vector<int> weights, bool check = true);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int weight(int k) const { return weights_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<int>& weights() const { return weights_; }
  const FormExpr& lie_differential(int k) const { return lie_d_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<FormExpr>& lie_differentials() const { return lie_d_; }
  /// d ebar^k
  const FormExpr& dbar(int k) const { return dbar_[static_cast<std::size_t>(k - 1)]; }
  /// d ebar^I
  const FormExpr& dbar_basis(Mask m) const { return dbar_basis_[m]; }
  /// Legs dropped when this coframe was obtained as a contraction limit.
  const std::vector<int>& dropped_legs() const { return dropped_; }
  CoframeSpec with_dropped_legs(std::vector<int> legs) const;

  /// ebar_i g = e^{-w_i f} d_i g (zero for the fibre directions).
  CoefExpr frame_derivative(const CoefExpr& g, int i) const;
  /// df = sum_i e^{-w_i f} f_i ebar^i.
  FormExpr df() const;
  /// Unbarred volume e^{1...4} = e^{-(w_1+..+w_4)f} ebar^{1234}.
  FormExpr unbarred_horizontal_volume() const;

 private:
  std::string name_;
  int dim_;
  std::vector<FormExpr> lie_d_;
  std::vector<int> weights_;
  std::vector<int> dropped_;
  std::vector<FormExpr> dbar_;
  std::vector<FormExpr> dbar_basis_;
};

/// d on forms with constant coefficients over the unbarred Lie coframe.
FormExpr lie_exterior_derivative(const FormExpr& a, std::span<const FormExpr> lie_differentials);
/// d(d e^k) for every leg; all zero iff the structure constants satisfy Jacobi.
std::vector<FormExpr> lie_d_squared(std::span<const FormExpr> lie_differentials);

std::vector<FormExpr> coframe_differentials(const CoframeSpec& c);
FormExpr exterior_derivative(const FormExpr& a, const CoframeSpec& c);

}  // namespace het
