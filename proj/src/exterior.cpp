#include "hetcalc/exterior.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "hetcalc/errors.hpp"

namespace het {

Mask mask_of(std::initializer_list<int> legs) {
  Mask m = 0;
  for (int k : legs) m |= Mask{1} << (k - 1);
  return m;
}

std::vector<int> legs_of(Mask m) {
  std::vector<int> out;
  for (int k = 1; m != 0; ++k, m >>= 1)
    if (m & 1U) out.push_back(k);
  return out;
}

int popcount(Mask m) { return std::popcount(m); }

int merge_sign(Mask a, Mask b) {
  // Each leg of b must move past the legs of a that are larger than it.
  int swaps = 0;
  for (Mask rest = b; rest != 0; rest &= rest - 1) {
    Mask low = rest & (~rest + 1);
    Mask above = ~((low << 1) - 1);
    swaps += std::popcount(a & above);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// FormExpr

FormExpr::FormExpr(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > kMaxDim || degree < 0 || degree > dim) {
    throw DimensionMismatch("invalid form shape: dim " + std::to_string(dim) + ", degree " +
                            std::to_string(degree));
  }
}

FormExpr FormExpr::basis(int dim, std::initializer_list<int> legs, const CoefExpr& coef) {
  return basis(dim, std::span<const int>(legs.begin(), legs.size()), coef);
}

FormExpr FormExpr::basis(int dim, std::span<const int> legs, const CoefExpr& coef) {
  FormExpr out(dim, static_cast<int>(legs.size()));
  std::vector<int> v(legs.begin(), legs.end());
  for (int k : v)
    if (k < 1 || k > dim) throw DimensionMismatch("leg " + std::to_string(k) + " outside coframe");
  int sign = 1;
  // Bubble sort keeps track of the permutation parity.
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j + 1 < v.size() - i; ++j) {
      if (v[j] == v[j + 1]) return out;
      if (v[j] > v[j + 1]) {
        std::swap(v[j], v[j + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t j = 0; j + 1 < v.size(); ++j)
    if (v[j] == v[j + 1]) return out;
  Mask m = 0;
  for (int k : v) m |= Mask{1} << (k - 1);
  out.add(m, sign == 1 ? coef : -coef);
  return out;
}

FormExpr FormExpr::scalar(int dim, const CoefExpr& value) {
  FormExpr out(dim, 0);
  out.add(0, value);
  return out;
}

CoefExpr FormExpr::coeff(Mask m) const {
  auto it = comps_.find(m);
  return it == comps_.end() ? CoefExpr{} : it->second;
}

CoefExpr FormExpr::coeff(std::initializer_list<int> sorted_legs) const { return coeff(mask_of(sorted_legs)); }

void FormExpr::add(Mask m, const CoefExpr& c) {
  if (c.is_zero()) return;
  if (popcount(m) != degree_) throw DimensionMismatch("component degree does not match form degree");
  if (m >> dim_ != 0) throw DimensionMismatch("component leg exceeds coframe dimension");
  auto [it, inserted] = comps_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

FormExpr& FormExpr::operator+=(const FormExpr& o) {
  // Zero forms carry no shape constraint (a wedge past top degree is zero).
  if (o.comps_.empty()) return *this;
  if (comps_.empty() && (dim_ != o.dim_ || degree_ != o.degree_)) return *this = o;
  if (o.dim_ != dim_ || o.degree_ != degree_) {
    throw DimensionMismatch("adding forms of different shape");
  }
  for (const auto& [m, c] : o.comps_) add(m, c);
  return *this;
}

FormExpr& FormExpr::operator-=(const FormExpr& o) { return *this += -o; }

FormExpr operator-(const FormExpr& a) {
  FormExpr out = a;
  for (auto& [m, c] : out.comps_) c = -c;
  return out;
}

FormExpr operator*(const CoefExpr& c, const FormExpr& a) {
  FormExpr out(a.dim_, a.degree_);
  if (c.is_zero()) return out;
  for (const auto& [m, v] : a.comps_) out.add(m, c * v);
  return out;
}

bool operator==(const FormExpr& a, const FormExpr& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
}

std::string FormExpr::str() const {
  if (comps_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : comps_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.str() << ")*e";
    for (int k : legs_of(m)) os << k;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Algebra

FormExpr wedge(const FormExpr& a, const FormExpr& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge of forms on different coframes");
  if (a.degree() + b.degree() > a.dim()) return FormExpr(a.dim(), a.dim());
  FormExpr out(a.dim(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.components()) {
    for (const auto& [mb, cb] : b.components()) {
      if (ma & mb) continue;
      CoefExpr prod = ca * cb;
      out.add(ma | mb, merge_sign(ma, mb) == 1 ? prod : -prod);
    }
  }
  return out;
}

FormExpr hodge_star(const FormExpr& a) {
  const Mask full = (Mask{1} << a.dim()) - 1;
  FormExpr out(a.dim(), a.dim() - a.degree());
  for (const auto& [m, c] : a.components()) {
    Mask comp = full & ~m;
    out.add(comp, merge_sign(m, comp) == 1 ? c : -c);
  }
  return out;
}

FormExpr horizontal_star(const FormExpr& a) {
  const Mask full = 0xF;
  FormExpr out(a.dim(), 4 - a.degree());
  for (const auto& [m, c] : a.components()) {
    if (m & ~full) throw DimensionMismatch("horizontal star of a form with fibre legs");
    Mask comp = full & ~m;
    out.add(comp, merge_sign(m, comp) == 1 ? c : -c);
  }
  return out;
}

FormExpr interior(int k, const FormExpr& a) {
  if (a.degree() == 0) return FormExpr(a.dim(), 0);
  FormExpr out(a.dim(), a.degree() - 1);
  const Mask bit = Mask{1} << (k - 1);
  for (const auto& [m, c] : a.components()) {
    if (!(m & bit)) continue;
    // sign = (-1)^{number of legs before k}
    int before = std::popcount(m & (bit - 1));
    out.add(m & ~bit, before % 2 == 0 ? c : -c);
  }
  return out;
}

CoefExpr evaluate(const FormExpr& a, std::span<const int> vectors) {
  if (static_cast<int>(vectors.size()) != a.degree()) {
    throw DimensionMismatch("form evaluated on the wrong number of vectors");
  }
  FormExpr cur = a;
  for (int v : vectors) cur = interior(v, cur);
  return cur.coeff(Mask{0});
}

CoefExpr evaluate(const FormExpr& a, std::initializer_list<int> vectors) {
  return evaluate(a, std::span<const int>(vectors.begin(), vectors.size()));
}

CoefExpr inner(const FormExpr& a, const FormExpr& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw DimensionMismatch("inner product shape");
  CoefExpr out;
  for (const auto& [m, c] : a.components()) {
    auto other = b.components().find(m);
    if (other != b.components().end()) out += c * other->second;
  }
  return out;
}

FormExpr truncate_legs(const FormExpr& a, int new_dim) {
  FormExpr out(new_dim, a.degree());
  for (const auto& [m, c] : a.components())
    if ((m >> new_dim) == 0) out.add(m, c);
  return out;
}

FormExpr extend_legs(const FormExpr& a, int new_dim) {
  FormExpr out(new_dim, a.degree());
  for (const auto& [m, c] : a.components()) out.add(m, c);
  return out;
}

// ---------------------------------------------------------------------------
// Lie coframe

FormExpr lie_exterior_derivative(const FormExpr& a, std::span<const FormExpr> lie_d) {
  FormExpr out(a.dim(), a.degree() + 1);
  for (const auto& [m, c] : a.components()) {
    if (c.max_jet_order() >= 0) throw BadParams("Lie differential of a non-constant form");
    // d(e^{i1..ip}) = sum_r (-1)^{r-1} e^{i1} .. d e^{ir} .. e^{ip}
    std::vector<int> legs = legs_of(m);
    for (std::size_t r = 0; r < legs.size(); ++r) {
      FormExpr left = FormExpr::basis(a.dim(), std::span<const int>(legs.data(), r));
      FormExpr right =
          FormExpr::basis(a.dim(), std::span<const int>(legs.data() + r + 1, legs.size() - r - 1));
      FormExpr piece = wedge(wedge(left, lie_d[static_cast<std::size_t>(legs[r] - 1)]), right);
      CoefExpr sc = (r % 2 == 0) ? c : -c;
      out += sc * piece;
    }
  }
  return out;
}

std::vector<FormExpr> lie_d_squared(std::span<const FormExpr> lie_d) {
  std::vector<FormExpr> out;
  for (const auto& dk : lie_d) out.push_back(lie_exterior_derivative(dk, lie_d));
  return out;
}

CoframeSpec::CoframeSpec(std::string name, int dim, std::vector<FormExpr> lie_differentials,
                         std::vector<int> weights, bool check)
    : name_(std::move(name)), dim_(dim), lie_d_(std::move(lie_differentials)), weights_(std::move(weights)) {
  if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("coframe dimension out of range");
  if (static_cast<int>(lie_d_.size()) != dim || static_cast<int>(weights_.size()) != dim) {
    throw DimensionMismatch("coframe needs one differential and one weight per leg");
  }
  for (std::size_t k = 0; k < lie_d_.size(); ++k) {
    if (lie_d_[k].dim() == 0) lie_d_[k] = FormExpr(dim, 2);
    if (lie_d_[k].dim() != dim || lie_d_[k].degree() != 2) {
      throw DimensionMismatch("structure differential must be a 2-form on the coframe");
    }
    if (weights_[k] < 0) throw BadParams("conformal weights must be nonnegative");
  }
  for (int k = 5; k <= dim; ++k) {
    if (weights_[static_cast<std::size_t>(k - 1)] != 0) {
      // df has no fibre component, so a weighted fibre leg would need
      // derivatives of f along the fibre.
      throw BadParams("fibre legs must have weight zero");
    }
  }
  if (check) {
    auto sq = lie_d_squared(lie_d_);
    for (std::size_t k = 0; k < sq.size(); ++k) {
      if (!sq[k].is_zero()) {
        throw NotIntegrable("d(de^" + std::to_string(k + 1) + ") = " + sq[k].str());
      }
    }
  }

  // d ebar^k = w_k df ^ ebar^k + e^{w_k f} sum c^k_I e^{-w_I f} ebar^I
  FormExpr dfe = df();
  for (int k = 1; k <= dim; ++k) {
    FormExpr out(dim, 2);
    int wk = weight(k);
    if (wk != 0) out += CoefExpr(wk) * wedge(dfe, FormExpr::basis(dim, {k}));
    for (const auto& [m, c] : lie_differential(k).components()) {
      int wi = 0;
      for (int leg : legs_of(m)) wi += weight(leg);
      out.add(m, c * CoefExpr::expf(wk - wi));
    }
    dbar_.push_back(std::move(out));
  }

  // d ebar^I for every subset, by the Leibniz rule on the lowest leg.
  const Mask count = Mask{1} << dim;
  dbar_basis_.assign(count, FormExpr());
  dbar_basis_[0] = FormExpr(dim, 1);
  for (Mask m = 1; m < count; ++m) {
    Mask low = m & (~m + 1);
    Mask rest = m & ~low;
    int leg = std::countr_zero(low) + 1;
    // d(ebar^leg ^ ebar^rest) = d ebar^leg ^ ebar^rest - ebar^leg ^ d ebar^rest
    FormExpr rest_form(dim, popcount(rest));
    rest_form.add(rest, 1);
    if (popcount(m) == dim) {
      dbar_basis_[m] = FormExpr(dim, dim);
      continue;
    }
    FormExpr out(dim, popcount(m) + 1);
    {
      out += wedge(dbar_[static_cast<std::size_t>(leg - 1)], rest_form);
      if (rest != 0) out -= wedge(FormExpr::basis(dim, {leg}), dbar_basis_[rest]);
    }
    dbar_basis_[m] = std::move(out);
  }
}

CoframeSpec CoframeSpec::with_dropped_legs(std::vector<int> legs) const {
  CoframeSpec out = *this;
  out.dropped_ = std::move(legs);
  return out;
}

CoefExpr CoframeSpec::frame_derivative(const CoefExpr& g, int i) const {
  if (i > 4) return {};
  CoefExpr d = partial_derivative(g, i);
  int w = weight(i);
  return w == 0 ? d : CoefExpr::expf(-w) * d;
}

FormExpr CoframeSpec::df() const {
  FormExpr out(dim_, 1);
  for (int i = 1; i <= std::min(4, dim_); ++i) {
    out.add(mask_of({i}), CoefExpr::expf(-weight(i)) * CoefExpr::jet({i}));
  }
  return out;
}

FormExpr CoframeSpec::unbarred_horizontal_volume() const {
  int w = 0;
  for (int i = 1; i <= 4; ++i) w += weight(i);
  return FormExpr::basis(dim_, {1, 2, 3, 4}, CoefExpr::expf(-w));
}

std::vector<FormExpr> coframe_differentials(const CoframeSpec& c) {
  std::vector<FormExpr> out;
  for (int k = 1; k <= c.dim(); ++k) out.push_back(c.dbar(k));
  return out;
}

FormExpr exterior_derivative(const FormExpr& a, const CoframeSpec& c) {
  if (a.dim() != c.dim()) throw DimensionMismatch("form and coframe dimensions differ");
  FormExpr out(c.dim(), std::min(a.degree() + 1, c.dim()));
  if (a.degree() >= c.dim()) return out;
  for (const auto& [m, g] : a.components()) {
    for (int i = 1; i <= std::min(4, c.dim()); ++i) {
      if (m & (Mask{1} << (i - 1))) continue;
      CoefExpr dg = c.frame_derivative(g, i);
      if (dg.is_zero()) continue;
      Mask single = Mask{1} << (i - 1);
      out.add(m | single, merge_sign(single, m) == 1 ? dg : -dg);
    }
    const FormExpr& dI = c.dbar_basis(m);
    for (const auto& [mm, cc] : dI.components()) out.add(mm, g * cc);
  }
  return out;
}

}  // namespace het
