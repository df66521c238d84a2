#include "hetcalc/diffring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hetcalc/errors.hpp"

namespace het {

// ---------------------------------------------------------------------------
// SymbolId

SymbolId SymbolId::param(std::string_view name) {
  if (name.empty() || name.size() > 15) {
    throw BadParams("parameter name must have 1..15 characters: '" + std::string(name) + "'");
  }
  SymbolId s;
  s.kind_ = Kind::Param;
  std::copy(name.begin(), name.end(), s.name_.begin());
  return s;
}

SymbolId SymbolId::jet(std::initializer_list<int> dirs) {
  return jet(std::span<const int>(dirs.begin(), dirs.size()));
}

SymbolId SymbolId::jet(std::span<const int> dirs) {
  if (static_cast<int>(dirs.size()) > kMaxJetOrder) {
    throw JetOrderExceeded("jet of order " + std::to_string(dirs.size()) + " exceeds the cap of " +
                           std::to_string(kMaxJetOrder));
  }
  SymbolId s;
  s.kind_ = Kind::Jet;
  s.order_ = static_cast<std::uint8_t>(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    if (dirs[k] < 1 || dirs[k] > 4) throw BadParams("jet direction out of range 1..4");
    s.idx_[k] = static_cast<std::uint8_t>(dirs[k]);
  }
  std::sort(s.idx_.begin(), s.idx_.begin() + s.order_);
  return s;
}

std::string_view SymbolId::name() const {
  std::size_t n = 0;
  while (n < name_.size() && name_[n] != '\0') ++n;
  return {name_.data(), n};
}

std::string SymbolId::str() const {
  if (is_param()) return std::string(name());
  std::string out = "f";
  if (order_ > 0) {
    out += '_';
    for (int k = 0; k < order_; ++k) out += static_cast<char>('0' + idx_[static_cast<std::size_t>(k)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monomial

int Monomial::exponent(const SymbolId& s) const {
  auto it = std::lower_bound(factors.begin(), factors.end(), s,
                             [](const auto& f, const SymbolId& x) { return f.first < x; });
  return (it != factors.end() && it->first == s) ? it->second : 0;
}

std::string Monomial::str() const {
  std::string out;
  for (const auto& [s, e] : factors) {
    if (!out.empty()) out += '*';
    out += s.str();
    if (e != 1) out += '^' + std::to_string(e);
  }
  if (expf != 0) {
    if (!out.empty()) out += '*';
    out += "e^(" + std::to_string(expf) + "f)";
  }
  return out.empty() ? "1" : out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.expf = a.expf + b.expf;
  m.factors.reserve(a.factors.size() + b.factors.size());
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  while (i != a.factors.end() || j != b.factors.end()) {
    if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) {
      m.factors.push_back(*i++);
    } else if (i == a.factors.end() || j->first < i->first) {
      m.factors.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0) m.factors.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// CoefExpr

CoefExpr::CoefExpr(long value) : CoefExpr(Rational(value)) {}

CoefExpr::CoefExpr(const Rational& value) {
  if (value != 0) terms_.push_back({Monomial{}, value});
}

CoefExpr CoefExpr::param(std::string_view name) { return symbol(SymbolId::param(name)); }

CoefExpr CoefExpr::jet(std::initializer_list<int> dirs) { return symbol(SymbolId::jet(dirs)); }

CoefExpr CoefExpr::symbol(const SymbolId& s, int power) {
  Monomial m;
  if (power != 0) m.factors.emplace_back(s, power);
  return monomial(std::move(m));
}

CoefExpr CoefExpr::expf(int k) {
  Monomial m;
  m.expf = k;
  return monomial(std::move(m));
}

CoefExpr CoefExpr::monomial(Monomial m, Rational coef) {
  CoefExpr e;
  if (coef != 0) e.terms_.push_back({std::move(m), std::move(coef)});
  return e;
}

CoefExpr CoefExpr::from_sorted(std::vector<Term> terms) {
  CoefExpr e;
  e.terms_ = std::move(terms);
  return e;
}

bool CoefExpr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().mono.is_one());
}

Rational CoefExpr::constant_value() const {
  if (!is_constant()) throw BadParams("expression is not a constant: " + str());
  return terms_.empty() ? Rational(0) : terms_.front().coef;
}

bool CoefExpr::contains(const std::function<bool(const SymbolId&)>& pred) const {
  for (const auto& t : terms_)
    for (const auto& [s, e] : t.mono.factors)
      if (pred(s)) return true;
  return false;
}

bool CoefExpr::contains(const SymbolId& s) const {
  return contains([&](const SymbolId& x) { return x == s; });
}

int CoefExpr::max_jet_order() const {
  int best = -1;
  for (const auto& t : terms_)
    for (const auto& [s, e] : t.mono.factors)
      if (s.is_jet()) best = std::max(best, s.order());
  return best;
}

CoefExpr& CoefExpr::operator+=(const CoefExpr& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->mono < j->mono)) {
      out.push_back(std::move(*i++));
    } else if (i == terms_.end() || j->mono < i->mono) {
      out.push_back(*j++);
    } else {
      Rational c = i->coef + j->coef;
      if (c != 0) out.push_back({std::move(i->mono), std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

CoefExpr& CoefExpr::operator-=(const CoefExpr& o) { return *this += -o; }

CoefExpr& CoefExpr::operator*=(const CoefExpr& o) { return *this = *this * o; }

CoefExpr operator*(const CoefExpr& a, const CoefExpr& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  if (b.is_constant()) {
    CoefExpr r = a;
    const Rational& c = b.terms_.front().coef;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }
  if (a.is_constant()) return b * a;
  std::map<Monomial, Rational> acc;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      auto [it, inserted] = acc.try_emplace(x.mono * y.mono, 0);
      it->second += x.coef * y.coef;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, std::move(c)});
  return CoefExpr::from_sorted(std::move(out));
}

CoefExpr operator-(const CoefExpr& a) {
  CoefExpr r = a;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

bool operator==(const CoefExpr& a, const CoefExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].mono != b.terms_[k].mono || a.terms_[k].coef != b.terms_[k].coef) return false;
  }
  return true;
}

CoefExpr CoefExpr::pow(int n) const {
  if (n < 0) throw BadParams("negative power of a CoefExpr; use inverse_monomial");
  CoefExpr result(1);
  CoefExpr base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

std::string CoefExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool one = t.mono.is_one();
    if (c != 1 || one) {
      os << c.get_str();
      if (!one) os << '*';
    }
    if (!one) os << t.mono.str();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Calculus

namespace {

SymbolId promote(const SymbolId& s, int i) {
  std::vector<int> dirs;
  for (int k = 0; k < s.order(); ++k) dirs.push_back(s.dir(k));
  dirs.push_back(i);
  if (static_cast<int>(dirs.size()) > kMaxJetOrder) {
    throw JetOrderExceeded("differentiating " + s.str() + " in direction " + std::to_string(i) +
                           " exceeds jet order " + std::to_string(kMaxJetOrder));
  }
  return SymbolId::jet(std::span<const int>(dirs));
}

}  // namespace

CoefExpr partial_derivative(const CoefExpr& e, int i) {
  if (i < 1 || i > 7) throw BadParams("partial derivative direction out of range: " + std::to_string(i));
  if (i > 4) return {};
  CoefExpr out;
  for (const auto& t : e.terms()) {
    // Leibniz over the factors of the monomial.
    for (std::size_t k = 0; k < t.mono.factors.size(); ++k) {
      const auto& [s, p] = t.mono.factors[k];
      if (!s.is_jet()) continue;
      Monomial rest = t.mono;
      if (p == 1) {
        rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        rest.factors[k].second = p - 1;
      }
      Monomial d = rest * Monomial{{{promote(s, i), 1}}, 0};
      out += CoefExpr::monomial(std::move(d), t.coef * p);
    }
    if (t.mono.expf != 0) {
      Monomial d = t.mono * Monomial{{{SymbolId::jet({i}), 1}}, 0};
      out += CoefExpr::monomial(std::move(d), t.coef * t.mono.expf);
    }
  }
  return out;
}

CoefExpr flat_laplacian(const CoefExpr& e) {
  CoefExpr out;
  for (int i = 1; i <= 4; ++i) out += partial_derivative(partial_derivative(e, i), i);
  return out;
}

CoefExpr grad_norm_sq() {
  CoefExpr out;
  for (int i = 1; i <= 4; ++i) out += CoefExpr::jet({i}).pow(2);
  return out;
}

CoefExpr hessian2() {
  CoefExpr out;
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      out += CoefExpr::jet({i, i}) * CoefExpr::jet({j, j}) - CoefExpr::jet({i, j}).pow(2);
    }
  }
  return out;
}

CoefExpr p_laplacian4() {
  CoefExpr g = grad_norm_sq();
  CoefExpr out;
  for (int i = 1; i <= 4; ++i) out += partial_derivative(g * CoefExpr::jet({i}), i);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double lookup(const Assignment& values, const SymbolId& s) {
  auto it = values.find(s);
  if (it == values.end()) throw UnboundSymbol("no value for symbol " + s.str());
  return it->second;
}

double term_value(const Term& t, const Assignment& values) {
  double v = t.coef.get_d();
  for (const auto& [s, p] : t.mono.factors) v *= std::pow(lookup(values, s), p);
  if (t.mono.expf != 0) v *= std::exp(t.mono.expf * lookup(values, SymbolId::jet({})));
  return v;
}

}  // namespace

double eval(const CoefExpr& e, const Assignment& values) {
  double sum = 0.0;
  for (const auto& t : e.terms()) sum += term_value(t, values);
  return sum;
}

std::pair<double, double> eval_with_scale(const CoefExpr& e, const Assignment& values) {
  double sum = 0.0;
  double scale = 0.0;
  for (const auto& t : e.terms()) {
    double v = term_value(t, values);
    sum += v;
    scale += std::abs(v);
  }
  return {sum, scale};
}

Rational eval_exact(const CoefExpr& e, const ExactAssignment& values,
                    const std::optional<Rational>& e2f) {
  Rational sum = 0;
  for (const auto& t : e.terms()) {
    Rational v = t.coef;
    for (const auto& [s, p] : t.mono.factors) {
      auto it = values.find(s);
      if (it == values.end()) throw UnboundSymbol("no exact value for symbol " + s.str());
      Rational base = it->second;
      int n = p;
      if (n < 0) {
        if (base == 0) throw BadParams("negative power of zero for " + s.str());
        base = 1 / base;
        n = -n;
      }
      for (int k = 0; k < n; ++k) v *= base;
    }
    if (t.mono.expf != 0) {
      if (t.mono.expf % 2 != 0 || !e2f) {
        throw UnboundSymbol("exact evaluation needs an even power of e^f and a value for e^{2f}");
      }
      Rational base = *e2f;
      int n = t.mono.expf / 2;
      if (n < 0) {
        base = 1 / base;
        n = -n;
      }
      for (int k = 0; k < n; ++k) v *= base;
    }
    sum += v;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Manipulation

CoefExpr substitute(const CoefExpr& e, const SymbolId& s, const CoefExpr& value) {
  CoefExpr out;
  std::optional<CoefExpr> inv;
  for (const auto& t : e.terms()) {
    int p = t.mono.exponent(s);
    if (p == 0) {
      out += CoefExpr::monomial(t.mono, t.coef);
      continue;
    }
    Monomial rest = t.mono;
    std::erase_if(rest.factors, [&](const auto& f) { return f.first == s; });
    CoefExpr factor;
    if (p > 0) {
      factor = value.pow(p);
    } else {
      if (!inv) inv = inverse_monomial(value);
      factor = inv->pow(-p);
    }
    out += CoefExpr::monomial(std::move(rest), t.coef) * factor;
  }
  return out;
}

CoefExpr drop_terms(const CoefExpr& e, const std::function<bool(const SymbolId&)>& pred) {
  CoefExpr out;
  for (const auto& t : e.terms()) {
    bool hit = std::any_of(t.mono.factors.begin(), t.mono.factors.end(),
                           [&](const auto& f) { return pred(f.first); });
    if (!hit) out += CoefExpr::monomial(t.mono, t.coef);
  }
  return out;
}

std::map<int, CoefExpr> split_by_expf(const CoefExpr& e) {
  std::map<int, CoefExpr> out;
  for (const auto& t : e.terms()) {
    Monomial m = t.mono;
    m.expf = 0;
    out[t.mono.expf] += CoefExpr::monomial(std::move(m), t.coef);
  }
  return out;
}

CoefExpr inverse_monomial(const CoefExpr& e) {
  if (e.size() != 1) throw BadParams("inverse_monomial needs a single-term expression: " + e.str());
  const Term& t = e.terms().front();
  Monomial m;
  m.expf = -t.mono.expf;
  for (const auto& [s, p] : t.mono.factors) {
    if (s.is_jet()) throw BadParams("cannot invert a jet symbol");
    m.factors.emplace_back(s, -p);
  }
  return CoefExpr::monomial(std::move(m), 1 / t.coef);
}

// ---------------------------------------------------------------------------
// Division

namespace {

struct DivisionOrder {
  std::function<bool(const SymbolId&)> eliminate;

  std::pair<int, int> weight(const Monomial& m) const {
    int elim = 0;
    int total = 0;
    for (const auto& [s, p] : m.factors) {
      total += p;
      if (eliminate && eliminate(s)) elim += p;
    }
    return {elim, total};
  }

  bool less(const Monomial& a, const Monomial& b) const {
    auto wa = weight(a);
    auto wb = weight(b);
    if (wa != wb) return wa < wb;
    // Lex on exponent vectors: the first symbol where the exponents differ
    // decides. Compatible with multiplication, unlike the storage order.
    auto i = a.factors.begin();
    auto j = b.factors.begin();
    while (i != a.factors.end() || j != b.factors.end()) {
      if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) {
        return i->second < 0;
      }
      if (i == a.factors.end() || j->first < i->first) return j->second > 0;
      if (i->second != j->second) return i->second < j->second;
      ++i;
      ++j;
    }
    return a.expf < b.expf;
  }
};

const Term& leading(const CoefExpr& e, const DivisionOrder& ord) {
  const Term* best = &e.terms().front();
  for (const auto& t : e.terms())
    if (ord.less(best->mono, t.mono)) best = &t;
  return *best;
}

// m / d when d divides m (e^{kf} is a unit); nullopt otherwise.
std::optional<Monomial> monomial_quotient(const Monomial& m, const Monomial& d) {
  Monomial q;
  q.expf = m.expf - d.expf;
  for (const auto& [s, p] : d.factors) {
    int have = m.exponent(s);
    if (p > 0 && have < p) return std::nullopt;
  }
  std::map<SymbolId, int> acc;
  for (const auto& [s, p] : m.factors) acc[s] += p;
  for (const auto& [s, p] : d.factors) acc[s] -= p;
  for (const auto& [s, p] : acc)
    if (p != 0) q.factors.emplace_back(s, p);
  return q;
}

}  // namespace

DivisionResult divide(const CoefExpr& num, const CoefExpr& den,
                      const std::function<bool(const SymbolId&)>& eliminate) {
  if (den.is_zero()) throw BadParams("division by zero expression");
  DivisionOrder ord{eliminate};
  const Term& lead = leading(den, ord);
  DivisionResult res;
  CoefExpr rest = num;
  std::size_t guard = 0;
  const std::size_t limit = 200000 + 100 * num.size();
  while (!rest.is_zero()) {
    if (++guard > limit) throw Error("division did not terminate");
    const Term lt = leading(rest, ord);
    auto q = monomial_quotient(lt.mono, lead.mono);
    CoefExpr lt_expr = CoefExpr::monomial(lt.mono, lt.coef);
    if (!q) {
      res.remainder += lt_expr;
      rest -= lt_expr;
      continue;
    }
    CoefExpr qt = CoefExpr::monomial(*q, lt.coef / lead.coef);
    res.quotient += qt;
    rest -= qt * den;
  }
  return res;
}

std::optional<CoefExpr> exact_quotient(const CoefExpr& num, const CoefExpr& den) {
  auto r = divide(num, den);
  if (!r.remainder.is_zero()) return std::nullopt;
  return r.quotient;
}

}  // namespace het
