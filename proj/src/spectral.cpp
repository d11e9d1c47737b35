#include "vstates/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vstates/specialfn.hpp"

namespace vstates::spectral {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kDetFloor = 1e-10;

}  // namespace

double omega_star(double alpha, int n_fold, double d) {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw std::invalid_argument("omega_star: alpha must lie in [0, 2)");
  if (n_fold < 2) throw std::invalid_argument("omega_star: N must be >= 2");
  if (!(d > 0.0)) throw std::invalid_argument("omega_star: d must be > 0");
  double sum = 0.0;
  const double ca = alpha > 0.0 ? specialfn::c_alpha(alpha) : 0.0;
  for (int n = 1; n < n_fold; ++n) {
    const double c = std::cos(2.0 * kPi * n / n_fold);
    const double s = std::sin(2.0 * kPi * n / n_fold);
    const double a2 = (c - 1.0) * (c - 1.0) + s * s;
    if (alpha == 0.0)
      sum += (1.0 - c) / (2.0 * kPi * a2 * d * d);
    else
      sum += alpha * ca * (1.0 - c) /
             (2.0 * kPi * std::pow(a2, 1.0 + 0.5 * alpha) *
              std::pow(d, 2.0 + alpha));
  }
  return sum;
}

double w_star(double alpha, double d) {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw std::invalid_argument("w_star: alpha must lie in [0, 2)");
  if (!(d > 0.0)) throw std::invalid_argument("w_star: d must be > 0");
  if (alpha == 0.0) return 1.0 / (4.0 * kPi * d);
  return alpha * specialfn::c_alpha(alpha) /
         (2.0 * kPi * std::pow(2.0 * d, 1.0 + alpha));
}

SpectralBlock m_block(double alpha, double gamma, double b, int j) {
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("m_block: b must lie in (0, 1)");
  if (j < 1) throw std::invalid_argument("m_block: j must be >= 1");
  SpectralBlock blk;
  blk.j = j;
  if (alpha == 0.0) {
    blk.scale = 0.5;
    const double jj = j;
    blk.m[0][0] = jj - 1.0 + (gamma - 1.0) * jj * b * b;
    blk.m[0][1] = (1.0 - gamma) * std::pow(b, j + 1);
    blk.m[1][0] = -std::pow(b, j - 1);
    blk.m[1][1] = (gamma - 1.0) * (jj - 1.0) + jj;
  } else {
    blk.scale = static_cast<double>(j);
    const double th = specialfn::theta_coeff(alpha, j);
    const double l1 = specialfn::lambda_coeff(alpha, b, 1);
    const double lj = specialfn::lambda_coeff(alpha, b, j);
    blk.m[0][0] = th + (gamma - 1.0) * b * b * l1;
    blk.m[0][1] = (1.0 - gamma) * b * b * lj;
    blk.m[1][0] = -lj;
    blk.m[1][1] = (gamma - 1.0) * std::pow(b, -alpha) * th + l1;
  }
  return blk;
}

std::vector<double> det_profile(double alpha, double gamma, double b,
                                int j_max) {
  if (j_max < 2) throw std::invalid_argument("det_profile: j_max must be >= 2");
  std::vector<double> out;
  out.reserve(j_max - 1);
  for (int j = 2; j <= j_max; ++j) out.push_back(m_block(alpha, gamma, b, j).det());
  return out;
}

namespace {

// Sufficient smallness conditions on b for the alpha > 0 inverse (used with
// gamma in [0, 1)): Theta_2/2 >= b^2 Lambda_1, (1-gamma) b^{-a} Theta_2 / 4
// >= Lambda_1, (1-gamma) b^{-a} Theta_2^2 / 8 >= 3 b^2 Lambda_1^2.
bool smallness_conditions(double alpha, double gamma, double b) {
  const double th2 = specialfn::theta_coeff(alpha, 2);
  const double l1 = specialfn::lambda_coeff(alpha, b, 1);
  const double bpow = std::pow(b, -alpha);
  if (!(0.5 * th2 >= b * b * l1)) return false;
  if (!((1.0 - gamma) * bpow * th2 / 4.0 >= l1)) return false;
  if (!((1.0 - gamma) * bpow * th2 * th2 / 8.0 >= 3.0 * b * b * l1 * l1))
    return false;
  return true;
}

}  // namespace

bool b_admissible(double alpha, double gamma, double b, int j_max) {
  if (!(b > 0.0 && b < 1.0)) return false;
  if (alpha == 0.0 && gamma == 0.0) return false;  // inverse leaves the space
  for (int j = 2; j <= j_max; ++j) {
    if (std::abs(m_block(alpha, gamma, b, j).det()) <= kDetFloor) return false;
  }
  if (alpha > 0.0 && gamma >= 0.0 && gamma < 1.0 &&
      !smallness_conditions(alpha, gamma, b))
    return false;
  return true;
}

std::vector<AdmissibleInterval> invertible_b_scan(
    double alpha, double gamma, int j_max, const std::vector<double>& b_grid) {
  std::vector<AdmissibleInterval> out;
  bool open = false;
  AdmissibleInterval cur;
  for (double b : b_grid) {
    const bool ok = b_admissible(alpha, gamma, b, j_max);
    if (ok && !open) {
      cur.lo = b;
      open = true;
    }
    if (ok) cur.hi = b;
    if (!ok && open) {
      out.push_back(cur);
      open = false;
    }
  }
  if (open) out.push_back(cur);
  return out;
}

contour::SineResidual linearized_apply(double alpha, double gamma, double b,
                                       const contour::FourierPair& h) {
  contour::SineResidual r;
  const int order = h.order();
  r.c.assign(order, 0.0);
  r.d.assign(order, 0.0);
  for (int j = 1; j <= order; ++j) {
    const SpectralBlock blk = m_block(alpha, gamma, b, j);
    const double aj = h.a[j - 1], bj = h.b[j - 1];
    r.c[j - 1] = blk.scale * (blk.m[0][0] * aj + blk.m[0][1] * bj);
    r.d[j - 1] = blk.scale * (blk.m[1][0] * aj + blk.m[1][1] * bj);
  }
  return r;
}

contour::FourierPair block_precondition(double alpha, double gamma, double b,
                                        const contour::SineResidual& r) {
  const int order = r.order();
  if (order < 1)
    throw std::invalid_argument("block_precondition: empty residual");
  const double viol = r.link_violation(gamma, b);
  double rnorm = 0.0;
  for (int j = 0; j < order; ++j)
    rnorm = std::max({rnorm, std::abs(r.c[j]), std::abs(r.d[j])});
  if (std::abs(viol) > 1e-8 * std::max(1.0, rnorm))
    throw std::invalid_argument(
        "block_precondition: input violates the first-mode linking relation "
        "by " + std::to_string(viol));

  contour::FourierPair f = contour::FourierPair::zero(order);
  const double link = (1.0 - gamma) * b * b;
  const double denom = 1.0 - link;
  const double s = alpha == 0.0 ? 0.5 : specialfn::lambda_coeff(alpha, b, 1);
  const double k = r.d[0] / (denom * s);
  f.a[0] = link * k;
  f.b[0] = k;
  for (int j = 2; j <= order; ++j) {
    const SpectralBlock blk = m_block(alpha, gamma, b, j);
    const double det = blk.det();
    if (std::abs(det) <= kDetFloor)
      throw std::runtime_error("block_precondition: singular block at mode " +
                               std::to_string(j));
    const double cj = r.c[j - 1], dj = r.d[j - 1];
    f.a[j - 1] = (blk.m[1][1] * cj - blk.m[0][1] * dj) / (det * blk.scale);
    f.b[j - 1] = (-blk.m[1][0] * cj + blk.m[0][0] * dj) / (det * blk.scale);
  }
  return f;
}

}  // namespace vstates::spectral
