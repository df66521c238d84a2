#include "hetcalc/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <sstream>

#include "hetcalc/errors.hpp"
#include "hetcalc/weierstrass.hpp"

namespace het {

namespace {

template <typename T>
void fill_jets(const ConformalJets<T>& j, auto&& put) {
  const T& g = j.g;
  for (int i = 0; i < 4; ++i) put(SymbolId::jet({i + 1}), j.g1[i] / (2 * g));
  for (int i = 0; i < 4; ++i)
    for (int k = i; k < 4; ++k)
      put(SymbolId::jet({i + 1, k + 1}), j.g2[i][k] / (2 * g) - j.g1[i] * j.g1[k] / (2 * g * g));
  for (int i = 0; i < 4; ++i)
    for (int k = i; k < 4; ++k)
      for (int l = k; l < 4; ++l) {
        T v = j.g3[i][k][l] / (2 * g) -
              (j.g2[i][k] * j.g1[l] + j.g2[i][l] * j.g1[k] + j.g2[k][l] * j.g1[i]) / (2 * g * g) +
              j.g1[i] * j.g1[k] * j.g1[l] / (g * g * g);
        put(SymbolId::jet({i + 1, k + 1, l + 1}), v);
      }
}

class WeierstrassProfile final : public DilatonProfile {
 public:
  WeierstrassProfile(double alpha, double d) : alpha_(alpha), d_(d), tau_(half_period(d)) {
    if (!(alpha > 0) || !(d > 0)) throw BadParams("weierstrass profile needs alpha > 0 and d > 0");
  }

  std::string name() const override { return "weierstrass"; }
  std::string domain() const override {
    std::ostringstream os;
    os.precision(17);
    os << "x^1 not in 2 n tau_+, tau_+ = " << tau_;
    return os.str();
  }
  double margin(const Point& x) const override {
    double r = std::fmod(x[0], 2 * tau_);
    if (r < 0) r += 2 * tau_;
    return std::min(r, 2 * tau_ - r);
  }
  ConformalJets<double> jets(const Point& x) const override {
    auto w = weierstrass_p(x[0], d_);
    const double a2 = alpha_ * alpha_;
    ConformalJets<double> j;
    j.g = a2 * w.p;
    j.g1[0] = a2 * w.dp;
    j.g2[0][0] = a2 * (6 * w.p * w.p - 2 * d_ * d_);
    j.g3[0][0][0] = a2 * 12 * w.p * w.dp;
    return j;
  }
  double u(const Point& x) const override { return weierstrass_p(x[0], d_).p; }
  double defining_residual(const Point& x) const override {
    auto w = weierstrass_p(x[0], d_);
    return (w.dp * w.dp - 4 * w.p * (w.p - d_) * (w.p + d_)) / (1 + std::abs(w.p * w.p * w.p));
  }
  std::pair<double, double> sample_box() const override { return {0.0, 2 * tau_}; }

  double tau() const { return tau_; }

 private:
  double alpha_, d_, tau_;
};

class FundamentalProfile final : public DilatonProfile {
 public:
  FundamentalProfile(Rational c, RationalPoint e) : c_(std::move(c)), e_(std::move(e)) {
    if (c_ <= 0) throw BadParams("fundamental profile needs c > 0");
  }

  std::string name() const override { return "fundamental"; }
  std::string domain() const override { return "R^4 minus the center"; }
  double margin(const Point& x) const override {
    double r2 = 0;
    for (int i = 0; i < 4; ++i) r2 += (x[i] - e_[i].get_d()) * (x[i] - e_[i].get_d());
    return std::sqrt(r2);
  }
  ConformalJets<double> jets(const Point& x) const override {
    Point y;
    for (int i = 0; i < 4; ++i) y[i] = x[i] - e_[i].get_d();
    return build<double>(c_.get_d(), y);
  }
  std::optional<ConformalJets<Rational>> exact_jets(const RationalPoint& x) const override {
    RationalPoint y;
    for (int i = 0; i < 4; ++i) y[i] = x[i] - e_[i];
    Rational r2 = 0;
    for (const auto& v : y) r2 += v * v;
    if (r2 == 0) throw AtPole("fundamental profile evaluated at its center");
    return build<Rational>(c_, y);
  }
  double defining_residual(const Point& x) const override {
    auto j = jets(x);
    double lap = 0;
    for (int i = 0; i < 4; ++i) lap += j.g2[i][i];
    return lap / std::abs(j.g);
  }
  std::pair<double, double> sample_box() const override { return {-1.0, 1.0}; }

 private:
  template <typename T>
  static ConformalJets<T> build(const T& c, const std::array<T, 4>& y) {
    T r2 = 0;
    for (const auto& v : y) r2 += v * v;
    const T r4 = r2 * r2, r6 = r4 * r2, r8 = r4 * r4;
    ConformalJets<T> j;
    j.g = c / r2;
    for (int i = 0; i < 4; ++i) j.g1[i] = -2 * c * y[i] / r4;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) j.g2[i][k] = c * (8 * y[i] * y[k] / r6 - (i == k ? T(2) / r4 : T(0)));
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          T s = 0;
          if (i == k) s += y[l];
          if (i == l) s += y[k];
          if (k == l) s += y[i];
          j.g3[i][k][l] = c * (8 * s / r6 - 48 * y[i] * y[k] * y[l] / r8);
        }
    return j;
  }

  Rational c_;
  RationalPoint e_;
};

class BallProfile final : public DilatonProfile {
 public:
  explicit BallProfile(Rational A2) : A2_(std::move(A2)) {
    if (A2_ <= 0) throw BadParams("ball profile needs |A|^2 > 0");
  }

  std::string name() const override { return "ball"; }
  std::string domain() const override { return "|x| < 1"; }
  double margin(const Point& x) const override {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    return 1.0 - std::sqrt(r2);
  }
  ConformalJets<double> jets(const Point& x) const override { return build<double>(A2_.get_d(), x); }
  std::optional<ConformalJets<Rational>> exact_jets(const RationalPoint& x) const override {
    return build<Rational>(A2_, x);
  }
  double defining_residual(const Point& x) const override {
    auto j = jets(x);
    double lap = 0;
    for (int i = 0; i < 4; ++i) lap += j.g2[i][i];
    return (lap + 2 * A2_.get_d()) / (2 * A2_.get_d());
  }
  std::pair<double, double> sample_box() const override { return {-0.5, 0.5}; }

 private:
  template <typename T>
  static ConformalJets<T> build(const T& A2, const std::array<T, 4>& x) {
    T r2 = 0;
    for (const auto& v : x) r2 += v * v;
    const T c = A2 / 4;
    ConformalJets<T> j;
    j.g = c * (1 - r2);
    for (int i = 0; i < 4; ++i) j.g1[i] = -2 * c * x[i];
    for (int i = 0; i < 4; ++i) j.g2[i][i] = -2 * c;
    return j;
  }

  Rational A2_;
};

class QuadraticProfile final : public DilatonProfile {
 public:
  QuadraticProfile(Rational k0, std::array<Rational, 4> lin, std::array<Rational, 4> diag)
      : k0_(std::move(k0)), lin_(std::move(lin)), diag_(std::move(diag)) {}

  std::string name() const override { return "custom"; }
  std::string domain() const override { return "where k0 + k.x + sum q_i x_i^2 > 0"; }
  double margin(const Point& x) const override { return jets(x).g; }
  ConformalJets<double> jets(const Point& x) const override {
    std::array<double, 4> lin, diag;
    for (int i = 0; i < 4; ++i) {
      lin[i] = lin_[i].get_d();
      diag[i] = diag_[i].get_d();
    }
    return build<double>(k0_.get_d(), lin, diag, x);
  }
  std::optional<ConformalJets<Rational>> exact_jets(const RationalPoint& x) const override {
    return build<Rational>(k0_, lin_, diag_, x);
  }
  double defining_residual(const Point& x) const override { return jets(x).g > 0 ? 0.0 : 1.0; }
  std::pair<double, double> sample_box() const override { return {-0.5, 0.5}; }

 private:
  template <typename T>
  static ConformalJets<T> build(const T& k0, const std::array<T, 4>& lin, const std::array<T, 4>& diag,
                                const std::array<T, 4>& x) {
    ConformalJets<T> j;
    j.g = k0;
    for (int i = 0; i < 4; ++i) {
      j.g += lin[i] * x[i] + diag[i] * x[i] * x[i];
      j.g1[i] = lin[i] + 2 * diag[i] * x[i];
      j.g2[i][i] = 2 * diag[i];
    }
    return j;
  }

  Rational k0_;
  std::array<Rational, 4> lin_, diag_;
};

}  // namespace

Assignment jet_assignment(const ConformalJets<double>& j) {
  Assignment a;
  a[SymbolId::jet({})] = 0.5 * std::log(j.g);
  fill_jets(j, [&](const SymbolId& s, double v) { a[s] = v; });
  return a;
}

ExactAssignment exact_jet_assignment(const ConformalJets<Rational>& j) {
  if (j.g <= 0) throw BadParams("e^{2f} must be positive");
  ExactAssignment a;
  fill_jets(j, [&](const SymbolId& s, const Rational& v) {
    Rational c = v;
    c.canonicalize();
    a[s] = c;
  });
  return a;
}

std::unique_ptr<DilatonProfile> weierstrass_profile(double alpha, double d) {
  return std::make_unique<WeierstrassProfile>(alpha, d);
}

std::unique_ptr<DilatonProfile> fundamental_profile(const Rational& c, const RationalPoint& center) {
  return std::make_unique<FundamentalProfile>(c, center);
}

std::unique_ptr<DilatonProfile> ball_profile(const Rational& A2) { return std::make_unique<BallProfile>(A2); }

Rational to_rational(double v, long max_den) {
  if (!std::isfinite(v)) throw BadParams("non-finite parameter");
  // Continued fraction convergents.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  Rational r(h1, k1);
  r.canonicalize();
  return r;
}

std::unique_ptr<DilatonProfile> quadratic_profile(const Rational& k0, const std::array<Rational, 4>& lin,
                                                  const std::array<Rational, 4>& diag) {
  if (k0 <= 0) throw BadParams("custom profile needs k0 > 0 (e^{2f} at the origin)");
  return std::make_unique<QuadraticProfile>(k0, lin, diag);
}

std::unique_ptr<DilatonProfile> make_profile(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, std::optional<double> fallback) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (!fallback) throw BadParams("profile '" + name + "' needs parameter '" + key + "'");
    return *fallback;
  };
  static const std::map<std::string, std::vector<std::string>> known{
      {"weierstrass", {"d", "alpha"}},
      {"fundamental", {"c", "alphaP", "e1", "e2", "e3", "e4"}},
      {"ball", {"A2"}},
      {"custom", {"k0", "k1", "k2", "k3", "k4", "q1", "q2", "q3", "q4"}}};
  auto kit = known.find(name);
  if (kit == known.end())
    throw BadParams("unknown profile '" + name + "' (expected weierstrass, fundamental, ball, custom)");
  for (const auto& [k, v] : params) {
    if (std::find(kit->second.begin(), kit->second.end(), k) == kit->second.end())
      throw BadParams("profile '" + name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw BadParams("parameter '" + k + "' is not finite");
  }
  if (name == "weierstrass") return weierstrass_profile(get("alpha", 1.0), get("d", 1.0));
  if (name == "fundamental") {
    RationalPoint e;
    for (int i = 0; i < 4; ++i) e[i] = to_rational(get("e" + std::to_string(i + 1), 0.0));
    // c directly, or the closed form c = 3 alpha' / 4
    if (params.count("c")) return fundamental_profile(to_rational(get("c", std::nullopt)), e);
    return fundamental_profile(Rational(3, 4) * to_rational(get("alphaP", 1.0)), e);
  }
  if (name == "ball") return ball_profile(to_rational(get("A2", 3.0)));
  if (name == "custom") {
    std::array<Rational, 4> lin, diag;
    for (int i = 0; i < 4; ++i) {
      lin[i] = to_rational(get("k" + std::to_string(i + 1), 0.0));
      diag[i] = to_rational(get("q" + std::to_string(i + 1), 0.0));
    }
    return quadratic_profile(to_rational(get("k0", 1.0)), lin, diag);
  }
  throw BadParams("unknown profile '" + name + "' (expected weierstrass, fundamental, ball, custom)");
}

}  // namespace het
