#include "vstates/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vstates/exec.hpp"

namespace vstates::quadrature {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

PeriodicGrid PeriodicGrid::make(int m) {
  if (m < 4 || m % 2 != 0)
    throw std::invalid_argument("PeriodicGrid: size must be even and >= 4");
  PeriodicGrid g;
  g.size = m;
  g.x.resize(m);
  for (int k = 0; k < m; ++k) g.x[k] = kTwoPi * k / m;
  return g;
}

double mean_integral(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_integral: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7, K15) bisection.

namespace {

// K15 nodes on [-1,1]; odd-index nodes form the embedded G7 rule.
constexpr std::array<double, 15> kKx = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr std::array<double, 15> kKw = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr std::array<double, 7> kGw = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct AdaptiveState {
  const std::function<double(double)>* f;
  double tol_per_len;
  int max_depth;
  long evals_left;
  double min_width = 0.0;  // noise guard: cells below this are accepted as-is
};

double gk15(AdaptiveState& st, double a, double b, double* err) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = (*st.f)(mid + half * kKx[i]);
    k += kKw[i] * v;
    if (i % 2 == 1) g += kGw[i / 2] * v;
  }
  st.evals_left -= 15;
  *err = std::abs(k - g) * std::abs(half);
  return k * half;
}

double adapt(AdaptiveState& st, double a, double b, double whole, double werr,
             int depth) {
  if (werr <= st.tol_per_len * (b - a) || depth >= st.max_depth ||
      b - a <= st.min_width)
    return whole;
  if (st.evals_left <= 0)
    throw std::runtime_error(
        "adaptive quadrature: evaluation budget exhausted before reaching "
        "tolerance (residual error estimate " +
        std::to_string(werr) + ")");
  const double mid = 0.5 * (a + b);
  double e1, e2;
  const double s1 = gk15(st, a, mid, &e1);
  const double s2 = gk15(st, mid, b, &e2);
  return adapt(st, a, mid, s1, e1, depth + 1) +
         adapt(st, mid, b, s2, e2, depth + 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth, long max_evals,
                          double min_width = 0.0) {
  AdaptiveState st{&f, tol / (b - a), max_depth, max_evals, min_width};
  // four base cells so the error allocation starts reasonably local
  double total = 0.0;
  const double h = (b - a) / 4.0;
  for (int i = 0; i < 4; ++i) {
    double e;
    const double s = gk15(st, a + i * h, a + (i + 1) * h, &e);
    total += adapt(st, a + i * h, a + (i + 1) * h, s, e, 0);
  }
  return total;
}

// int_0^len g(t) dt for g with a |t|^{-beta} singularity at t = 0 (beta < 1),
// through the grading t = len u^q. The zone t < t_floor is unrepresentable
// when t is an offset from a wrapped circle point, so it is closed with the
// power-law stub C t^{1-beta}/(1-beta), C fitted at the floor.
double integrate_graded_offset(const std::function<double(double)>& g_of_t,
                               double len, double beta, double tol,
                               int max_depth, long max_evals, double t_floor,
                               double min_width = 0.0) {
  const double q =
      beta <= 0.0 ? 2.0 : std::clamp(2.0 / (1.0 - beta), 2.0, 128.0);
  const double u_min =
      t_floor <= 0.0 ? 0.0 : std::pow(t_floor / len, 1.0 / q);
  const auto h = [&](double u) {
    const double t = len * std::pow(u, q);
    if (t < 1e-270) return 0.0;
    return g_of_t(t) * len * q * std::pow(u, q - 1.0);  // dt = len q u^{q-1} du
  };
  double stub = 0.0;
  if (u_min > 0.0)
    stub = g_of_t(t_floor) * t_floor / (1.0 - std::max(beta, 0.0));
  return integrate_adaptive(h, u_min, 1.0, tol, max_depth, max_evals,
                            min_width) +
         stub;
}

}  // namespace

double adaptive_oracle(const std::function<double(double)>& g,
                       std::optional<double> singular_at, double tol,
                       const AdaptiveOptions& opts) {
  const auto wrapped = [&](double y) {
    y = std::fmod(y, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    return g(y);
  };
  if (!singular_at) {
    return integrate_adaptive(wrapped, 0.0, kTwoPi, tol * kTwoPi,
                              opts.max_depth, opts.max_evals) /
           kTwoPi;
  }
  const double y0 = *singular_at;
  const double beta = std::min(opts.singular_order, 0.98);
  // Offsets below the wrap resolution of the circle cannot be represented in
  // the argument of g; their mass is closed analytically in the stub. The
  // cell-width floor keeps the bisection from chasing the wrap noise that
  // remains just above the floor.
  const double t_floor = 1e-11;
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    const auto g_of_t = [&](double t) { return wrapped(y0 + sign * t); };
    total += integrate_graded_offset(g_of_t, kPi, beta, tol * kPi,
                                     opts.max_depth, opts.max_evals, t_floor,
                                     1e-7);
  }
  return total / kTwoPi;
}

// ---------------------------------------------------------------------------
// Singular kernel weights.

namespace {

std::vector<double> grid_kernel_from_weights(const std::vector<double>& w,
                                             int m) {
  const int half = m / 2;
  std::vector<double> kernel(m);
  for (int l = 0; l < m; ++l) {
    const double u = kTwoPi * l / m;
    double s = w[0];
    for (int j = 1; j < half; ++j) s += 2.0 * w[j] * std::cos(j * u);
    s += w[half] * (l % 2 == 0 ? 1.0 : -1.0);
    kernel[l] = s;
  }
  return kernel;
}

std::string cache_file_name(double alpha, int m) {
  const char* dir = std::getenv("VSTATES_CACHE_DIR");
  if (!dir || !*dir) return {};
  std::ostringstream os;
  os << dir << "/weights_a";
  os.precision(17);
  os << alpha << "_M" << m << ".txt";
  return os.str();
}

bool load_weights_file(const std::string& path, int m, SingularWeights* out) {
  std::ifstream in(path);
  if (!in) return false;
  int count = 0;
  if (!(in >> count) || count != m / 2 + 1) return false;
  out->w.resize(count);
  for (int i = 0; i < count; ++i)
    if (!(in >> std::hexfloat >> out->w[i])) return false;
  if (!(in >> out->achieved_bound)) return false;
  return true;
}

void store_weights_file(const std::string& path, const SingularWeights& w) {
  std::ofstream out(path);
  if (!out) return;
  out << w.w.size() << "\n" << std::hexfloat;
  for (double v : w.w) out << v << "\n";
  out << w.achieved_bound << "\n";
}

SingularWeights compute_weights(double alpha, int m) {
  SingularWeights sw;
  sw.alpha = alpha;
  sw.size = m;
  sw.regularized = alpha >= 1.0;
  const int half = m / 2;

  const std::string cache_path = cache_file_name(alpha, m);
  if (!cache_path.empty() && load_weights_file(cache_path, m, &sw)) {
    sw.grid_kernel = grid_kernel_from_weights(sw.w, m);
    return sw;
  }

  sw.w.assign(half + 1, 0.0);
  const double coef_tol = 1e-12;
  const AdaptiveOptions opts;

  // Both integrands are even and 2pi-periodic: mean value = (1/pi) times the
  // integral over (0, pi], taken in exact-offset form (the argument is the
  // distance to the singular point, never a wrapped circle coordinate).
  // Regularized coefficients (cos(m t) - 1) K(t) behave like t^{2-alpha} at
  // the origin; the kernel mean itself carries the full t^{-alpha}.
  std::vector<double> wt(half + 1, 0.0);
  parallel_for(half, vstates::default_exec_mode(), [&](int idx) {
    const int mm = idx + 1;
    const auto f = [&, mm](double t) {
      const double s = 2.0 * std::sin(0.5 * t);
      return (std::cos(mm * t) - 1.0) * std::pow(s * s, -0.5 * alpha);
    };
    // Grade only the first oscillation; beyond it the integrand is smooth
    // and plain bisection resolves the oscillation without the grading
    // compressing it.
    const double split = std::min(1.0, kPi / mm);
    double v = integrate_graded_offset(f, split, alpha - 1.0,
                                       0.5 * coef_tol * kPi, opts.max_depth,
                                       opts.max_evals, 0.0);
    v += integrate_adaptive(f, split, kPi, 0.5 * coef_tol * kPi,
                            opts.max_depth, opts.max_evals);
    wt[mm] = v / kPi;
  });

  double w0 = 0.0;
  if (alpha < 1.0) {
    const auto k0 = [&](double t) {
      const double s = 2.0 * std::sin(0.5 * t);
      return std::pow(s * s, -0.5 * alpha);
    };
    w0 = integrate_graded_offset(k0, kPi, alpha, coef_tol * kPi,
                                 opts.max_depth, opts.max_evals, 0.0) /
         kPi;
  }
  for (int mm = 0; mm <= half; ++mm)
    sw.w[mm] = (alpha < 1.0) ? wt[mm] + w0 : wt[mm];
  sw.achieved_bound = coef_tol;

  if (!cache_path.empty()) store_weights_file(cache_path, sw);
  sw.grid_kernel = grid_kernel_from_weights(sw.w, m);
  return sw;
}

struct WeightCache {
  std::mutex mu;
  std::map<std::pair<long long, int>, std::shared_ptr<const SingularWeights>>
      entries;
};

WeightCache& weight_cache() {
  static WeightCache cache;
  return cache;
}

}  // namespace

std::shared_ptr<const SingularWeights> singular_fourier_weights(double alpha,
                                                                int m) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument(
        "singular_fourier_weights: alpha must lie in (0, 2)");
  if (m < 4 || m % 2 != 0)
    throw std::invalid_argument(
        "singular_fourier_weights: M must be even and >= 4");
  const auto key = std::make_pair(
      static_cast<long long>(std::llround(alpha * 1e12)), m);
  {
    std::lock_guard<std::mutex> lk(weight_cache().mu);
    const auto it = weight_cache().entries.find(key);
    if (it != weight_cache().entries.end()) return it->second;
  }
  auto computed = std::make_shared<const SingularWeights>(
      compute_weights(alpha, m));
  std::lock_guard<std::mutex> lk(weight_cache().mu);
  auto [it, inserted] = weight_cache().entries.emplace(key, computed);
  return it->second;  // concurrent duplicate insert resolves to first entry
}

std::shared_ptr<const SingularWeights> log_kernel_weights(int m) {
  if (m < 4 || m % 2 != 0)
    throw std::invalid_argument("log_kernel_weights: M must be even and >= 4");
  const auto key = std::make_pair(static_cast<long long>(-1), m);
  {
    std::lock_guard<std::mutex> lk(weight_cache().mu);
    const auto it = weight_cache().entries.find(key);
    if (it != weight_cache().entries.end()) return it->second;
  }
  SingularWeights sw;
  sw.alpha = 0.0;
  sw.size = m;
  sw.regularized = false;
  sw.w.assign(m / 2 + 1, 0.0);
  for (int mm = 1; mm <= m / 2; ++mm) sw.w[mm] = 1.0 / mm;
  sw.achieved_bound = 0.0;
  sw.grid_kernel = grid_kernel_from_weights(sw.w, m);
  auto computed = std::make_shared<const SingularWeights>(std::move(sw));
  std::lock_guard<std::mutex> lk(weight_cache().mu);
  auto [it, inserted] = weight_cache().entries.emplace(key, computed);
  return it->second;
}

std::vector<double> convolve_singular(const SingularWeights& weights,
                                      const std::vector<double>& values) {
  const int m = weights.size;
  if (static_cast<int>(values.size()) != m)
    throw std::invalid_argument("convolve_singular: size mismatch");
  const int half = m / 2;
  // projections onto cos(j x), sin(j x)
  std::vector<double> ac(half + 1, 0.0), as(half + 1, 0.0);
  for (int k = 0; k < m; ++k) {
    const double x = kTwoPi * k / m;
    ac[0] += values[k];
    for (int j = 1; j < half; ++j) {
      ac[j] += 2.0 * values[k] * std::cos(j * x);
      as[j] += 2.0 * values[k] * std::sin(j * x);
    }
    ac[half] += values[k] * (k % 2 == 0 ? 1.0 : -1.0);
  }
  for (int j = 0; j <= half; ++j) {
    ac[j] /= m;
    as[j] /= m;
  }
  std::vector<double> out(m, 0.0);
  for (int k = 0; k < m; ++k) {
    const double x = kTwoPi * k / m;
    double s = weights.w[0] * ac[0];
    for (int j = 1; j < half; ++j)
      s += weights.w[j] * (ac[j] * std::cos(j * x) + as[j] * std::sin(j * x));
    s += weights.w[half] * ac[half] * (k % 2 == 0 ? 1.0 : -1.0);
    out[k] = s;
  }
  return out;
}

}  // namespace vstates::quadrature
