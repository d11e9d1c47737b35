#include "vstates/contour.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vstates/specialfn.hpp"

namespace vstates::contour {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double eval_cosine_series(const std::vector<double>& coeff, double x) {
  double s = 0.0;
  for (std::size_t j = 0; j < coeff.size(); ++j)
    s += coeff[j] * std::cos((j + 1.0) * x);
  return s;
}

double eval_cosine_series_deriv(const std::vector<double>& coeff, double x) {
  double s = 0.0;
  for (std::size_t j = 0; j < coeff.size(); ++j)
    s -= coeff[j] * (j + 1.0) * std::sin((j + 1.0) * x);
  return s;
}

}  // namespace

double PatchConfig::perturbation_scale() const {
  return eps * std::pow(std::abs(eps), alpha);
}

void PatchConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw std::invalid_argument("PatchConfig: alpha must lie in [0, 2)");
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("PatchConfig: b must lie in (0, 1)");
  if (b > 0.97)
    throw std::invalid_argument(
        "PatchConfig: b must be <= 0.97 (hypergeometric series route needs "
        "b^2 <= 0.9409)");
  if (!(d > 0.0)) throw std::invalid_argument("PatchConfig: d must be > 0");
  if (std::abs(strength_norm()) < 1e-12)
    throw std::invalid_argument(
        "PatchConfig: normalization 1 - b^2 + gamma b^2 must be nonzero");
  if (mode == PatchMode::corotating && n_fold < 2)
    throw std::invalid_argument("PatchConfig: n_fold must be >= 2");
  if (alpha == 0.0 && gamma == 0.0)
    throw std::invalid_argument(
        "PatchConfig: gamma = 0 with alpha = 0 is rejected; the constrained "
        "linearization is not an isomorphism there");
  if (alpha > 0.0 && !(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument(
        "PatchConfig: for alpha > 0 the construction covers gamma in [0, 1)");
  if (std::abs(eps) * (1.0 + 1.0) >= 0.5 * d)  // crude |f| <= 1 envelope
    throw std::invalid_argument(
        "PatchConfig: eps too large, components would not stay disjoint "
        "(need eps (1 + |f|) < d/2)");
}

double FourierPair::max_abs() const {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

RadiusProfiles radius_profiles(const PatchConfig& cfg, const FourierPair& f,
                               const quadrature::PeriodicGrid& grid) {
  const double eta = cfg.perturbation_scale();
  RadiusProfiles p;
  const int m = grid.size;
  p.r1.resize(m);
  p.r2.resize(m);
  p.dr1.resize(m);
  p.dr2.resize(m);
  for (int k = 0; k < m; ++k) {
    const double x = grid.x[k];
    p.r1[k] = 1.0 + eta * eval_cosine_series(f.a, x);
    p.r2[k] = cfg.b + eta * eval_cosine_series(f.b, x);
    p.dr1[k] = eta * eval_cosine_series_deriv(f.a, x);
    p.dr2[k] = eta * eval_cosine_series_deriv(f.b, x);
  }
  for (int k = 0; k < m; ++k) {
    if (!(p.r1[k] > 0.0) || !(p.r2[k] > 0.0))
      throw std::runtime_error(
          "radius_profiles: perturbed radius is not positive at grid node " +
          std::to_string(k));
  }
  return p;
}

namespace {

// Everything the inner loops need, precomputed once per evaluation.
struct EvalTables {
  int m = 0;
  double alpha, gamma, b, d, eps, eta, epow;  // epow = |eps|^alpha
  double ca = 0.0;                            // C_alpha (alpha > 0)
  bool logcase = true;
  std::vector<double> cosx, sinx, sh2;  // sh2 = sin^2(u/2)
  std::vector<double> f1, f2, df1, df2, r1, r2;
  std::vector<double> self_kw;              // kernel node weights incl. 1/M
  std::vector<double> cross_log, cross_pow; // log(1/Abar), Abar^{-alpha/2}
  std::vector<double> abar;

  struct Copy {
    double ct, st;        // cos/sin of the copy angle
    double an, k_an;      // A_n and its kernel value
    double vx, vy;        // v_n = (I - Q_n) d e1
    double sign1, sign2;  // source-component prefactors
  };
  std::vector<Copy> copies;
};

EvalTables build_tables(const PatchConfig& cfg, const FourierPair& f,
                        const quadrature::PeriodicGrid& grid) {
  cfg.validate();
  if (cfg.eps == 0.0)
    throw std::invalid_argument(
        "evaluate_fields: eps must be nonzero; the eps = 0 limit is the "
        "linear theory");
  EvalTables t;
  t.m = grid.size;
  t.alpha = cfg.alpha;
  t.gamma = cfg.gamma;
  t.b = cfg.b;
  t.d = cfg.d;
  t.eps = cfg.eps;
  t.eta = cfg.perturbation_scale();
  t.epow = std::pow(std::abs(cfg.eps), cfg.alpha);
  t.logcase = cfg.alpha == 0.0;
  if (!t.logcase) t.ca = specialfn::c_alpha(cfg.alpha);

  const int m = t.m;
  t.cosx.resize(m);
  t.sinx.resize(m);
  t.sh2.resize(m);
  for (int k = 0; k < m; ++k) {
    t.cosx[k] = std::cos(grid.x[k]);
    t.sinx[k] = std::sin(grid.x[k]);
    const double sh = std::sin(0.5 * grid.x[k]);
    t.sh2[k] = sh * sh;
  }

  t.f1.resize(m);
  t.f2.resize(m);
  t.df1.resize(m);
  t.df2.resize(m);
  for (int k = 0; k < m; ++k) {
    t.f1[k] = eval_cosine_series(f.a, grid.x[k]);
    t.f2[k] = eval_cosine_series(f.b, grid.x[k]);
    t.df1[k] = eval_cosine_series_deriv(f.a, grid.x[k]);
    t.df2[k] = eval_cosine_series_deriv(f.b, grid.x[k]);
  }
  t.r1.resize(m);
  t.r2.resize(m);
  for (int k = 0; k < m; ++k) {
    t.r1[k] = 1.0 + t.eta * t.f1[k];
    t.r2[k] = cfg.b + t.eta * t.f2[k];
    if (!(t.r1[k] > 0.0) || !(t.r2[k] > 0.0))
      throw std::runtime_error("evaluate_fields: perturbed radius is not "
                               "positive at grid node " + std::to_string(k));
    if (!(t.r1[k] - t.r2[k] > 0.0))
      throw std::runtime_error(
          "evaluate_fields: interfaces crossed (R1 <= R2) at grid node " +
          std::to_string(k));
  }

  const auto weights =
      t.logcase ? quadrature::log_kernel_weights(m)
                : quadrature::singular_fourier_weights(cfg.alpha, m);
  t.self_kw.resize(m);
  for (int l = 0; l < m; ++l) t.self_kw[l] = weights->node_weight(l);

  t.abar.resize(m);
  t.cross_log.resize(m);
  t.cross_pow.resize(m);
  const double db = 1.0 - cfg.b;
  for (int l = 0; l < m; ++l) {
    t.abar[l] = db * db + 4.0 * cfg.b * t.sh2[l];
    if (t.logcase)
      t.cross_log[l] = -std::log(t.abar[l]);
    else
      t.cross_pow[l] = std::pow(t.abar[l], -0.5 * cfg.alpha);
  }

  const bool travelling = cfg.mode == PatchMode::travelling;
  const int ncopy = travelling ? 1 : cfg.n_fold - 1;
  t.copies.resize(ncopy);
  for (int n = 1; n <= ncopy; ++n) {
    auto& c = t.copies[n - 1];
    const double theta = travelling ? kPi : 2.0 * kPi * n / cfg.n_fold;
    c.ct = std::cos(theta);
    c.st = std::sin(theta);
    c.vx = cfg.d * (1.0 - c.ct);
    c.vy = -cfg.d * c.st;
    c.an = c.vx * c.vx + c.vy * c.vy;
    c.k_an = t.logcase ? -std::log(c.an) : std::pow(c.an, -0.5 * cfg.alpha);
    if (travelling) {
      c.sign1 = -1.0;
      c.sign2 = 1.0 - cfg.gamma;
    } else {
      c.sign1 = 1.0;
      c.sign2 = cfg.gamma - 1.0;
    }
  }
  return t;
}

// Accumulates the three integral families of one residual component at one
// grid node. Every 1/eps amplification has been reorganized into expm1/log1p
// forms, so the evaluation stays fully accurate down to eps ~ 1e-6.
struct ComponentAccum {
  double self = 0.0, self_smooth = 0.0, cross = 0.0, rot = 0.0;
  double min_dist2 = 1e300;
};

void accumulate_component(const EvalTables& t, int i, int k,
                          ComponentAccum* out) {
  const int m = t.m;
  const bool comp1 = i == 1;
  const std::vector<double>& fs = comp1 ? t.f1 : t.f2;
  const std::vector<double>& dfs = comp1 ? t.df1 : t.df2;
  const std::vector<double>& rs = comp1 ? t.r1 : t.r2;
  const std::vector<double>& fc = comp1 ? t.f2 : t.f1;
  const std::vector<double>& dfc = comp1 ? t.df2 : t.df1;
  const std::vector<double>& rc = comp1 ? t.r2 : t.r1;
  const double beta_s = comp1 ? 1.0 : t.b;
  const double beta_c = comp1 ? t.b : 1.0;
  const double dbeta = beta_s - beta_c;
  const double bb_cross = beta_s * beta_c;
  const double beta2 = beta_s * beta_s;
  const double beta_pow = std::pow(beta_s, 2.0 - t.alpha);
  const double logbeta2 = 2.0 * std::log(beta_s);
  const double eta = t.eta, eps = t.eps, alpha = t.alpha;
  const double fx = fs[k], dfx = dfs[k], rx = rs[k];
  const double cxk = t.cosx[k], sxk = t.sinx[k];

  double acc_kernel = 0.0, acc_smooth = 0.0, acc_cross = 0.0;

  for (int l = 0; l < m; ++l) {
    const int jy = k - l >= 0 ? k - l : k - l + m;
    const double su = t.sinx[l], cu = t.cosx[l];

    // self interaction (singular kernel; skip the exactly-zero diagonal)
    if (l != 0) {
      const double fy = fs[jy], dfy = dfs[jy], ry = rs[jy];
      const double dq = (fx - fy) / (2.0 * std::sqrt(t.sh2[l]));
      const double rr = rx * ry;
      const double q = dq * dq / rr;
      const double p = (beta_s * (fx + fy) + eta * fx * fy) / beta2;
      const double lp = std::log1p(eta * p);
      const double lq = std::log1p(eta * eta * q);
      if (t.logcase) {
        const double pr = (beta_s * (fx + fy) + eta * fx * fy) * su +
                          (rx * dfy - dfx * ry) * cu + eta * dfx * dfy * su;
        acc_kernel += pr * t.self_kw[l];
        acc_smooth += ((lp + lq) / eta) * beta2 * su + (logbeta2 + lp + lq) * pr;
      } else {
        const double zr =
            beta_pow * std::expm1((1.0 - 0.5 * alpha) * lp - 0.5 * alpha * lq) /
            eta;
        const double cf = std::exp(-0.5 * alpha * (std::log(rr) + lq));
        const double s = zr * su +
                         cf * ((rx * dfy - dfx * ry) * cu + eta * dfx * dfy * su);
        acc_kernel += s * t.self_kw[l];
      }
    }

    // interaction with the other interface of the same component (smooth)
    {
      const double fj = fc[jy], dfj = dfc[jy], rj = rc[jy];
      const double dfij = fx - fj;
      const double mixed = beta_s * fj + beta_c * fx + eta * fx * fj;
      const double cc = 2.0 * dbeta * dfij + eta * dfij * dfij +
                        4.0 * t.sh2[l] * (beta_c * fx + beta_s * fj + eta * fx * fj);
      const double pcr = mixed * su + (rx * dfj - dfx * rj) * cu +
                         eta * dfx * dfj * su;
      const double lpc = std::log1p(eta * cc / t.abar[l]);
      if (t.logcase) {
        acc_cross += t.cross_log[l] * pcr -
                     (lpc / eta) * (bb_cross * su + eta * pcr);
      } else {
        const double wc = std::expm1(-0.5 * alpha * lpc) / eta;
        acc_cross += t.cross_pow[l] *
                     (pcr + wc * (bb_cross * su + eta * pcr));
      }
    }
  }

  // rotated / mirror copies (kernels bounded away from zero)
  double acc_rot = 0.0;
  double min_d2 = 1e300;
  for (const auto& c : t.copies) {
    for (int src = 1; src <= 2; ++src) {
      const std::vector<double>& fj = src == 1 ? t.f1 : t.f2;
      const std::vector<double>& dfj = src == 1 ? t.df1 : t.df2;
      const std::vector<double>& rj = src == 1 ? t.r1 : t.r2;
      const double beta_j = src == 1 ? 1.0 : t.b;
      const double bb = beta_s * beta_j;
      const double sgn = src == 1 ? c.sign1 : c.sign2;
      double acc = 0.0;
      for (int l = 0; l < m; ++l) {
        const int jy = k - l >= 0 ? k - l : k - l + m;
        const double cy = t.cosx[jy], sy = t.sinx[jy];
        const double cyt = cy * c.ct - sy * c.st;  // cos(y + theta)
        const double syt = sy * c.ct + cy * c.st;  // sin(y + theta)
        const double rjy = rj[jy];
        const double gx = rx * cxk - rjy * cyt;
        const double gy = rx * sxk - rjy * syt;
        const double cn = -2.0 * (gx * c.vx + gy * c.vy) +
                          eps * (gx * gx + gy * gy);
        min_d2 = std::min(min_d2, c.an + eps * cn);
        const double su = t.sinx[l], cu = t.cosx[l];
        const double sut = su * c.ct - cu * c.st;  // sin(u - theta)
        const double cut = cu * c.ct + su * c.st;  // cos(u - theta)
        const double fjy = fj[jy], dfjy = dfj[jy];
        const double ptr = (beta_s * fjy + beta_j * fx + eta * fx * fjy) * sut +
                           (rx * dfjy - dfx * rjy) * cut +
                           eta * dfx * dfjy * sut;
        const double lpn = std::log1p(eps * cn / c.an);
        if (t.logcase) {
          acc += c.k_an * ptr - (lpn / eps) * (bb * sut + eta * ptr);
        } else {
          const double wn = std::expm1(-0.5 * alpha * lpn) / eps;
          acc += c.k_an * (t.epow * ptr + wn * (bb * sut + eta * ptr));
        }
      }
      acc_rot += sgn * acc;
    }
  }

  // The gamma weighting follows the source interface: integrals over the
  // outer boundary carry 1, integrals over the inner boundary carry gamma-1.
  const double self_w = comp1 ? 1.0 : t.gamma - 1.0;
  const double cross_w = comp1 ? t.gamma - 1.0 : 1.0;
  const double mean = 1.0 / static_cast<double>(m);
  if (t.logcase) {
    out->self = self_w * (acc_kernel - acc_smooth * mean) / (2.0 * rx);
    out->cross = cross_w / (2.0 * rx) * acc_cross * mean;
    out->rot = acc_rot * mean / (2.0 * rx);
  } else {
    out->self = self_w * t.ca / rx * acc_kernel;
    out->cross = cross_w * t.ca / rx * acc_cross * mean;
    out->rot = t.ca / rx * acc_rot * mean;
  }
  out->min_dist2 = min_d2;
}

}  // namespace

ResidualFields evaluate_fields(const PatchConfig& cfg, const FourierPair& f,
                               const quadrature::PeriodicGrid& grid,
                               ExecMode exec) {
  const EvalTables t = build_tables(cfg, f, grid);
  const int m = t.m;
  ResidualFields out;
  out.base1.resize(m);
  out.base2.resize(m);
  out.slope1.resize(m);
  out.slope2.resize(m);
  std::vector<double> min_d2(m, 1e300);

  const double strength = kPi * cfg.strength_norm();
  const bool travelling = cfg.mode == PatchMode::travelling;

  parallel_for(m, exec, [&](int k) {
    ComponentAccum a1, a2;
    accumulate_component(t, 1, k, &a1);
    accumulate_component(t, 2, k, &a2);
    out.base1[k] = a1.self + a1.cross + a1.rot;
    out.base2[k] = a2.self + a2.cross + a2.rot;
    if (travelling) {
      out.slope1[k] =
          -strength * (t.sinx[k] - t.eta * t.df1[k] * t.cosx[k] / t.r1[k]);
      out.slope2[k] =
          -strength * (t.sinx[k] - t.eta * t.df2[k] * t.cosx[k] / t.r2[k]);
    } else {
      out.slope1[k] = strength * (cfg.eps * t.eta * t.df1[k] -
                                  cfg.d * t.eta * t.df1[k] * t.cosx[k] / t.r1[k] +
                                  cfg.d * t.sinx[k]);
      out.slope2[k] = strength * (cfg.eps * t.eta * t.df2[k] -
                                  cfg.d * t.eta * t.df2[k] * t.cosx[k] / t.r2[k] +
                                  cfg.d * t.sinx[k]);
    }
    min_d2[k] = std::min(a1.min_dist2, a2.min_dist2);
  });

  double d2 = 1e300;
  for (double v : min_d2) d2 = std::min(d2, v);
  out.min_copy_clearance = d2 > 0.0 ? std::sqrt(d2) : -std::sqrt(-d2);
  if (!t.copies.empty() && !(out.min_copy_clearance > 1e-3 * cfg.d))
    throw std::runtime_error(
        "evaluate_fields: rotated copies too close, clearance " +
        std::to_string(out.min_copy_clearance) + " below 1e-3 * d");
  return out;
}

std::pair<std::vector<double>, std::vector<double>> corotating_residual(
    const PatchConfig& cfg, const FourierPair& f, double omega,
    const quadrature::PeriodicGrid& grid, ExecMode exec) {
  if (cfg.mode != PatchMode::corotating)
    throw std::invalid_argument("corotating_residual: config mode mismatch");
  const ResidualFields rf = evaluate_fields(cfg, f, grid, exec);
  std::vector<double> g1(grid.size), g2(grid.size);
  for (int k = 0; k < grid.size; ++k) {
    g1[k] = rf.base1[k] + omega * rf.slope1[k];
    g2[k] = rf.base2[k] + omega * rf.slope2[k];
  }
  return {std::move(g1), std::move(g2)};
}

std::pair<std::vector<double>, std::vector<double>> travelling_residual(
    const PatchConfig& cfg, const FourierPair& f, double w,
    const quadrature::PeriodicGrid& grid, ExecMode exec) {
  if (cfg.mode != PatchMode::travelling)
    throw std::invalid_argument("travelling_residual: config mode mismatch");
  const ResidualFields rf = evaluate_fields(cfg, f, grid, exec);
  std::vector<double> h1(grid.size), h2(grid.size);
  for (int k = 0; k < grid.size; ++k) {
    h1[k] = rf.base1[k] + w * rf.slope1[k];
    h2[k] = rf.base2[k] + w * rf.slope2[k];
  }
  return {std::move(h1), std::move(h2)};
}

SineProjection sine_project(const std::vector<double>& values, int order) {
  const int m = static_cast<int>(values.size());
  if (order < 1 || order >= m / 2)
    throw std::invalid_argument("sine_project: need 1 <= order < M/2");
  SineProjection out;
  out.coeff.assign(order, 0.0);
  double mean = 0.0, energy = 0.0;
  for (int k = 0; k < m; ++k) {
    mean += values[k];
    energy += values[k] * values[k];
  }
  mean /= m;
  energy /= m;
  out.cosine_leak = std::abs(mean);
  for (int j = 1; j <= order; ++j) {
    double cs = 0.0, cc = 0.0;
    for (int k = 0; k < m; ++k) {
      const double x = 2.0 * kPi * k / m;
      cs += values[k] * std::sin(j * x);
      cc += values[k] * std::cos(j * x);
    }
    out.coeff[j - 1] = 2.0 * cs / m;
    out.cosine_leak = std::max(out.cosine_leak, std::abs(2.0 * cc / m));
  }
  double retained = 0.0;
  for (double c : out.coeff) retained += 0.5 * c * c;
  out.discarded_energy = std::sqrt(std::max(0.0, energy - retained));
  return out;
}

SineResidual project_pair(const std::vector<double>& g1,
                          const std::vector<double>& g2, int order) {
  const SineProjection p1 = sine_project(g1, order);
  const SineProjection p2 = sine_project(g2, order);
  SineResidual r;
  r.c = p1.coeff;
  r.d = p2.coeff;
  r.cosine_leak = std::max(p1.cosine_leak, p2.cosine_leak);
  r.discarded_energy = std::max(p1.discarded_energy, p2.discarded_energy);
  return r;
}

std::vector<double> circulation(const PatchConfig& cfg, const FourierPair& f) {
  cfg.validate();
  const auto grid = quadrature::PeriodicGrid::make(256);
  const double eta = cfg.perturbation_scale();
  double m1 = 0.0, m2 = 0.0;
  for (int k = 0; k < grid.size; ++k) {
    const double r1 = 1.0 + eta * eval_cosine_series(f.a, grid.x[k]);
    const double r2 = cfg.b + eta * eval_cosine_series(f.b, grid.x[k]);
    m1 += r1 * r1;
    m2 += r2 * r2;
  }
  m1 /= grid.size;
  m2 /= grid.size;
  const double per_component =
      (m1 + (cfg.gamma - 1.0) * m2) / cfg.strength_norm();
  std::vector<double> out;
  if (cfg.mode == PatchMode::travelling) {
    out = {per_component, -per_component};
  } else {
    out.assign(cfg.n_fold, per_component);
  }
  return out;
}

std::vector<BoundaryCurve> boundary_curves(const PatchConfig& cfg,
                                           const FourierPair& f, int samples) {
  cfg.validate();
  if (samples < 8) throw std::invalid_argument("boundary_curves: samples < 8");
  const double eta = cfg.perturbation_scale();
  const bool travelling = cfg.mode == PatchMode::travelling;
  const int ncopies = travelling ? 2 : cfg.n_fold;
  std::vector<BoundaryCurve> out;
  for (int comp = 1; comp <= 2; ++comp) {
    for (int n = 0; n < ncopies; ++n) {
      BoundaryCurve curve;
      curve.component = comp;
      curve.copy = n;
      curve.points.resize(samples);
      const double theta = travelling ? 0.0 : 2.0 * kPi * n / cfg.n_fold;
      const double ct = std::cos(theta), st = std::sin(theta);
      const double cx = cfg.d * (1.0 - ct), cy = -cfg.d * st;
      for (int s = 0; s < samples; ++s) {
        const double y = 2.0 * kPi * s / samples;
        const double base = comp == 1 ? 1.0 : cfg.b;
        const auto& coeff = comp == 1 ? f.a : f.b;
        const double r = cfg.eps * (base + eta * eval_cosine_series(coeff, y));
        double px = cx + r * std::cos(y + theta);
        double py = cy + r * std::sin(y + theta);
        if (travelling && n == 1) {
          px = 2.0 * cfg.d - (r * std::cos(y));
          py = -(r * std::sin(y));
        }
        curve.points[s] = {px, py};
      }
      out.push_back(std::move(curve));
    }
  }
  return out;
}

}  // namespace vstates::contour
