#pragma once

// Real slice of the Weierstrass function with invariants g2 = 4 d^2, g3 = 0:
//   P'^2 = 4 P^3 - 4 d^2 P = 4 P (P - d)(P + d),
// real period 2 tau_+, double poles at 2 n tau_+.

#include <vector>

namespace het {

struct WeierstrassValue {
  double p;      // P(x)
  double dp;     // P'(x)
};

/// Coefficients c_k of P(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}, k = 2..kmax.
std::vector<double> weierstrass_laurent(double d, int kmax);

/// Throws AtPole within 1e-12 (relative to tau_+) of a pole, BadParams for d <= 0.
WeierstrassValue weierstrass_p(double x, double d);

/// tau_+ by adaptive quadrature of the integral over [d, inf) after the
/// substitution u = d / cos^2(theta) ... tamed to a smooth integrand.
double half_period(double d);

/// Arithmetic-geometric mean.
double agm(double a, double b);

/// tau_+ = K(1/sqrt 2) / sqrt(2 d) with K from the AGM.
double half_period_agm(double d);

}  // namespace het
