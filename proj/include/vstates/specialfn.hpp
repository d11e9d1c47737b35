#pragma once

#include <stdexcept>

namespace vstates::specialfn {

// Regime of the kernel exponent: alpha = 0 is the planar Euler (log) kernel,
// alpha = 1 is SQG, the open intervals are the generalized family.
enum class AlphaRegime { zero, subcritical, critical, supercritical };

struct AlphaKind {
  double alpha;

  explicit AlphaKind(double a) : alpha(a) {
    if (!(a >= 0.0 && a < 2.0))
      throw std::domain_error("AlphaKind: alpha must lie in [0, 2)");
  }

  AlphaRegime regime() const {
    if (alpha == 0.0) return AlphaRegime::zero;
    if (alpha < 1.0) return AlphaRegime::subcritical;
    if (alpha == 1.0) return AlphaRegime::critical;
    return AlphaRegime::supercritical;
  }
};

// Euler gamma function. Lanczos approximation with reflection for x < 0;
// relative accuracy is ~1e-14 on (0, 50). Throws on non-positive integers.
double gamma_fn(double x);

// Rising factorial (x)_j = x (x+1) ... (x+j-1), with (x)_0 = 1.
double pochhammer(double x, int j);

// Gauss hypergeometric series sum_k (a)_k (b)_k / ((c)_k k!) z^k for
// 0 <= z < 1. Series summation only; accuracy degrades as z -> 1 when
// c - a - b <= 0, callers must keep z <= 0.9409 (b <= 0.97 upstream).
double gauss_2f1(double a, double b, double c, double z);

// C_alpha = Gamma(alpha/2) / (2^{1-alpha} Gamma((2-alpha)/2)), 0 < alpha < 2.
double c_alpha(double alpha);

// Spectral coefficient of the self-interaction kernel at mode j >= 1.
// Theta_1 = 0 exactly. At alpha = 1 the value is taken as the two-sided
// limit of the alpha != 1 expression (evaluated at 1 +- 1e-6 and averaged);
// the limit agrees with (2/pi) sum_{l=2}^{j} 1/(2l-1) to ~1e-13.
double theta_coeff(double alpha, int j);

// Cross-interaction coefficient Lambda_j(b) via the hypergeometric route:
// Gamma(alpha/2)/(2^{1-alpha} Gamma(1-alpha/2)) (alpha/2)_j / j! b^{j-1}
//   * 2F1(alpha/2, j+alpha/2; j+1; b^2).
double lambda_coeff(double alpha, double b, int j);

// Bessel function of the first kind, integer order n >= 0. Ascending series
// for |x| <= 12, Hankel asymptotics for large x, downward recurrence in the
// gap where neither converges (orders >= 5 just above the series range).
double bessel_j(int n, double x);

// Independent route for Lambda_j(b): the oscillatory integral
// (1/b) int_0^inf J_j(b t) J_j(t) t^{alpha-1} dt, integrated numerically up
// to a cut T and closed with the product of Hankel expansions integrated by
// parts. Throws if the tail bound cannot be pushed below ~1e-9.
double lambda_bessel_oracle(double alpha, double b, int j);

}  // namespace vstates::specialfn
