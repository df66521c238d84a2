#include "hetcalc/weierstrass.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "hetcalc/errors.hpp"

namespace het {

namespace {

// Series is used for |z| <= kSeriesRadius * tau_+, truncated after z^38: at
// the radius the next term is ~1e-22 relative, so the duplication steps see
// only roundoff. Stopping at z^14 leaves ~1e-10 there, which the doubling
// towards tau_+ amplifies past 1e-8.
constexpr double kSeriesRadius = 0.5;
constexpr int kSeriesKmax = 20;

}  // namespace

std::vector<double> weierstrass_laurent(double d, int kmax) {
  std::vector<double> c(static_cast<std::size_t>(std::max(kmax, 3) + 1), 0.0);
  c[2] = d * d / 5.0;  // g2 / 20
  c[3] = 0.0;          // g3 / 28
  for (int k = 4; k <= kmax; ++k) {
    double s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += c[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(k - m)];
    c[static_cast<std::size_t>(k)] = 3.0 * s / ((2.0 * k + 1.0) * (k - 3.0));
  }
  c.resize(static_cast<std::size_t>(kmax + 1));
  return c;
}

double agm(double a, double b) {
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * std::abs(a); ++it) {
    double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return 0.5 * (a + b);
}

double half_period_agm(double d) {
  if (!(d > 0)) throw BadParams("half period needs d > 0");
  const double K = std::numbers::pi / (2.0 * agm(1.0, std::numbers::sqrt2 / 2.0));
  return K / std::sqrt(2.0 * d);
}

double half_period(double d) {
  if (!(d > 0)) throw BadParams("half period needs d > 0");
  // u = d sec^2(theta) maps [d, inf) to [0, pi/2) and removes both
  // endpoint singularities: du / sqrt(4u^3 - 4d^2 u) = d^{-1/2} dtheta / sqrt(1 + cos^2 theta).
  auto integrand = [](double t) { return 1.0 / std::sqrt(1.0 + std::cos(t) * std::cos(t)); };
  double err = 0.0;
  double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, std::numbers::pi / 2.0,
                                                                           15, 1e-15, &err);
  return I / std::sqrt(d);
}

WeierstrassValue weierstrass_p(double x, double d) {
  if (!(d > 0)) throw BadParams("Weierstrass invariant d must be positive");
  if (!std::isfinite(x)) throw BadParams("Weierstrass argument must be finite");
  const double tau = half_period_agm(d);
  double r = std::fmod(x, 2.0 * tau);
  if (r < 0) r += 2.0 * tau;
  double sign = 1.0;
  if (r > tau) {
    r = 2.0 * tau - r;  // P(2 tau - x) = P(x), P'(2 tau - x) = -P'(x)
    sign = -1.0;
  }
  if (r < 1e-12 * tau) throw AtPole("Weierstrass function evaluated at a pole");

  int halvings = 0;
  double z = r;
  while (z > kSeriesRadius * tau) {
    z *= 0.5;
    ++halvings;
  }

  static thread_local double cached_d = -1.0;
  static thread_local std::vector<double> c;
  if (d != cached_d) {
    c = weierstrass_laurent(d, kSeriesKmax);
    cached_d = d;
  }
  const double z2 = z * z;
  double p = 1.0 / z2;
  double dp = -2.0 / (z2 * z);
  double zp = z2;  // z^{2k-2} starting at k = 2
  for (int k = 2; k <= kSeriesKmax; ++k) {
    p += c[static_cast<std::size_t>(k)] * zp;
    dp += (2.0 * k - 2.0) * c[static_cast<std::size_t>(k)] * zp / z;
    zp *= z2;
  }

  const double g2half = 2.0 * d * d;
  for (int h = 0; h < halvings; ++h) {
    const double pp = 6.0 * p * p - g2half;  // P''
    const double ratio = pp / dp;
    const double p2 = -2.0 * p + 0.25 * ratio * ratio;
    const double dp2 = -dp + 0.25 * (pp / (dp * dp * dp)) * (12.0 * p * dp * dp - pp * pp);
    p = p2;
    dp = dp2;
  }
  return {p, sign * dp};
}

}  // namespace het
