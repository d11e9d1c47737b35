#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace vstates::quadrature {

// Uniform grid x_k = 2 pi k / M on the circle, M even.
struct PeriodicGrid {
  int size = 0;
  std::vector<double> x;

  static PeriodicGrid make(int m);
};

// Mean-value trapezoid (1/M) sum of samples; spectrally accurate for smooth
// periodic integrands and exact for trigonometric polynomials of degree < M.
double mean_integral(const std::vector<double>& values);

struct AdaptiveOptions {
  double tol = 1e-10;
  // Order of the |y - y0|^{-beta} singularity; selects the grading exponent
  // q = 2 / (1 - beta) of the substitution y = y0 + pi u^q.
  double singular_order = 0.5;
  int max_depth = 52;
  long max_evals = 40'000'000;
};

// Slow independent oracle: mean-value integral of g over [0, 2pi) by
// adaptive Gauss-Kronrod bisection, with graded refinement toward an
// optional singular point. Throws when the evaluation budget is exhausted
// before reaching tol.
double adaptive_oracle(const std::function<double(double)>& g,
                       std::optional<double> singular_at, double tol,
                       const AdaptiveOptions& opts = {});

// Fourier-side weights of the singular factor (4 sin^2(y/2))^{-alpha/2}:
//   w_m = mean-value of e^{imy} (4 sin^2(y/2))^{-alpha/2},  m = 0 .. M/2.
// For alpha in (0,1) the weights are the plain Fourier coefficients. For
// alpha in [1,2) those diverge individually and the stored weights are the
// regularized differences w_m - w_0 (with w_0 := 0); applied to a cofactor
// that vanishes at the singular node the two notions coincide.
struct SingularWeights {
  double alpha = 0.0;
  int size = 0;                    // grid size M
  bool regularized = false;        // alpha >= 1
  std::vector<double> w;           // m = 0 .. M/2
  std::vector<double> grid_kernel; // W(u_l) = sum_m w_m e^{i m u_l}, l = 0 .. M-1
  double achieved_bound = 0.0;     // worst per-coefficient quadrature error

  // Product-quadrature weight of node l, including the 1/M of the
  // mean-value trapezoid: mean of K(u) T(u) ~= sum_l node_weight(l) T(u_l).
  double node_weight(int l) const { return grid_kernel[l] / size; }
};

// Computed once per (alpha, M) by adaptive graded quadrature and cached in
// process memory; set VSTATES_CACHE_DIR to persist tables across runs.
std::shared_ptr<const SingularWeights> singular_fourier_weights(double alpha,
                                                                int m);

// alpha = 0 analogue for the kernel log(1/(4 sin^2(u/2))): coefficients are
// exact (1/|m|, and 0 at m = 0), no quadrature involved.
std::shared_ptr<const SingularWeights> log_kernel_weights(int m);

// x  ->  mean-value of (4 sin^2((x-y)/2))^{-alpha/2} g(y) dy on the grid,
// computed as a Fourier multiplier. For regularized weights (alpha >= 1) the
// result is the renormalized convolution with the kernel mean removed.
std::vector<double> convolve_singular(const SingularWeights& weights,
                                      const std::vector<double>& values);

}  // namespace vstates::quadrature
