#pragma once

// Closed-form dilaton profiles. Each profile is described through
// g = e^{2f} and its partial derivatives up to order three; the f-jets follow
// from f = (1/2) ln g.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hetcalc/diffring.hpp"

namespace het {

using Point = std::array<double, 4>;
using RationalPoint = std::array<Rational, 4>;

template <typename T>
struct ConformalJets {
  T g{};
  std::array<T, 4> g1{};
  std::array<std::array<T, 4>, 4> g2{};
  std::array<std::array<std::array<T, 4>, 4>, 4> g3{};
};

class DilatonProfile {
 public:
  virtual ~DilatonProfile() = default;

  virtual std::string name() const = 0;
  virtual std::string domain() const = 0;
  /// Positive inside the domain: distance to the singular set or boundary.
  virtual double margin(const Point& x) const = 0;
  virtual ConformalJets<double> jets(const Point& x) const = 0;
  /// Exact jets at rational points for profiles rational in x; nullopt otherwise.
  virtual std::optional<ConformalJets<Rational>> exact_jets(const RationalPoint& /*x*/) const { return std::nullopt; }
  /// The profile's defining scalar (P(x^1) for the elliptic slice, e^{2f} otherwise).
  virtual double u(const Point& x) const { return jets(x).g; }
  /// Residual of the profile's own defining equation at x.
  virtual double defining_residual(const Point& x) const = 0;
  /// Box [lo, hi]^4 from which sample points are drawn.
  virtual std::pair<double, double> sample_box() const = 0;
};

/// f, f_i, f_ij, f_ijk (sorted indices) from the derivatives of e^{2f}.
Assignment jet_assignment(const ConformalJets<double>& j);
/// f_i, f_ij, f_ijk exactly (f itself is omitted: it only enters through e^{kf}).
ExactAssignment exact_jet_assignment(const ConformalJets<Rational>& j);

/// e^{2f} = alpha^2 P(x^1; d) with P the real Weierstrass slice.
std::unique_ptr<DilatonProfile> weierstrass_profile(double alpha, double d);
/// e^{2f} = c / |x - e|^2.
std::unique_ptr<DilatonProfile> fundamental_profile(const Rational& c, const RationalPoint& center);
/// e^{2f} = (|A|^2 / 4)(1 - |x|^2) on the unit ball.
std::unique_ptr<DilatonProfile> ball_profile(const Rational& A2);

/// e^{2f} = k0 + sum_i (k_i x_i + q_i x_i^2).
std::unique_ptr<DilatonProfile> quadratic_profile(const Rational& k0, const std::array<Rational, 4>& lin,
                                                  const std::array<Rational, 4>& diag);

/// Catalogue constructor from name and numeric parameters (defaults in brackets):
/// weierstrass(d [1], alpha [1]), fundamental(c, or alphaP [1] with c = 3 alphaP / 4;
/// e1..e4 [0]), ball(A2 [3]), custom(k0 [1], k1..k4, q1..q4 [0]). Throws BadParams.
std::unique_ptr<DilatonProfile> make_profile(const std::string& name, const std::map<std::string, double>& params);

/// Double to a nearby rational with bounded denominator (for exact checks).
Rational to_rational(double v, long max_den = 1000000);

}  // namespace het
