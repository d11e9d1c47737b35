#pragma once

#include <array>
#include <string>
#include <vector>

#include "vstates/exec.hpp"
#include "vstates/quadrature.hpp"

namespace vstates::contour {

enum class PatchMode { corotating, travelling };

// Physical and geometric parameters of one problem instance. The two
// interfaces are circles of radius eps and eps*b around the component
// center, with cosine perturbations scaled by eps |eps|^alpha.
struct PatchConfig {
  double alpha = 0.0;
  int n_fold = 2;            // ignored for travelling pairs
  double gamma = 0.0;
  double b = 0.5;
  double d = 1.0;
  double eps = 0.0;
  PatchMode mode = PatchMode::corotating;

  double strength_norm() const { return 1.0 - b * b + gamma * b * b; }
  double perturbation_scale() const;  // eps * |eps|^alpha
  int copy_count() const {
    return mode == PatchMode::travelling ? 2 : n_fold;
  }
  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

// Cosine-coefficient pair (f1, f2); mode j is stored at index j-1. The
// first-mode linking constraint a_1 = (1-gamma) b^2 b_1 makes the pair a
// member of the constrained perturbation space.
struct FourierPair {
  std::vector<double> a;  // f1
  std::vector<double> b;  // f2

  static FourierPair zero(int order) {
    return FourierPair{std::vector<double>(order, 0.0),
                       std::vector<double>(order, 0.0)};
  }
  int order() const { return static_cast<int>(a.size()); }
  void apply_link(double gamma, double bradius) {
    if (!a.empty()) a[0] = (1.0 - gamma) * bradius * bradius * b[0];
  }
  double link_violation(double gamma, double bradius) const {
    if (a.empty()) return 0.0;
    return a[0] - (1.0 - gamma) * bradius * bradius * b[0];
  }
  double max_abs() const;
};

// Sine-coefficient pair of the two residual components, plus projection
// diagnostics (cosine leakage and energy beyond the retained modes).
struct SineResidual {
  std::vector<double> c;  // component 1
  std::vector<double> d;  // component 2
  double cosine_leak = 0.0;
  double discarded_energy = 0.0;

  int order() const { return static_cast<int>(c.size()); }
  double link_violation(double gamma, double bradius) const {
    if (c.empty()) return 0.0;
    return c[0] - (1.0 - gamma) * bradius * bradius * d[0];
  }
};

struct BoundaryCurve {
  int component = 0;  // 1 = outer interface, 2 = inner interface
  int copy = 0;       // 0 .. N-1
  std::vector<std::array<double, 2>> points;
};

// R_i and dR_i/dx sampled on the grid.
struct RadiusProfiles {
  std::vector<double> r1, r2, dr1, dr2;
};

RadiusProfiles radius_profiles(const PatchConfig& cfg, const FourierPair& f,
                               const quadrature::PeriodicGrid& grid);

// One evaluation of the contour functionals, split into the part that is
// independent of the rotation/translation speed and the affine coefficient
// of the speed: residual_i = base_i + speed * slope_i.
struct ResidualFields {
  std::vector<double> base1, slope1;
  std::vector<double> base2, slope2;
  double min_copy_clearance = 0.0;  // over all rotated/mirror copies
};

ResidualFields evaluate_fields(const PatchConfig& cfg, const FourierPair& f,
                               const quadrature::PeriodicGrid& grid,
                               ExecMode exec = default_exec_mode());

// Grid values of G_i (co-rotating, speed Omega) or H_i (travelling, speed W).
std::pair<std::vector<double>, std::vector<double>> corotating_residual(
    const PatchConfig& cfg, const FourierPair& f, double omega,
    const quadrature::PeriodicGrid& grid, ExecMode exec = default_exec_mode());

std::pair<std::vector<double>, std::vector<double>> travelling_residual(
    const PatchConfig& cfg, const FourierPair& f, double w,
    const quadrature::PeriodicGrid& grid, ExecMode exec = default_exec_mode());

// Sine coefficients 2 * mean(values * sin(j x)) for j = 1..order, with the
// cosine / high-mode content reported alongside.
struct SineProjection {
  std::vector<double> coeff;
  double cosine_leak = 0.0;
  double discarded_energy = 0.0;
};
SineProjection sine_project(const std::vector<double>& values, int order);

SineResidual project_pair(const std::vector<double>& g1,
                          const std::vector<double>& g2, int order);

// Scalar-normalized mass of each patch component by the exact polar-area
// formula; the normalization is designed to give 1 per component (+1/-1 for
// the travelling pair) at f = 0.
std::vector<double> circulation(const PatchConfig& cfg, const FourierPair& f);

// Sampled interface polylines of all copies, in parameter order.
std::vector<BoundaryCurve> boundary_curves(const PatchConfig& cfg,
                                           const FourierPair& f, int samples);

}  // namespace vstates::contour
