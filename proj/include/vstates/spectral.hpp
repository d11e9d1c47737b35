#pragma once

#include <array>
#include <vector>

#include "vstates/contour.hpp"

namespace vstates::spectral {

// 2x2 linearization block coupling the mode-j perturbations of the two
// interfaces, with the regime prefactor (1/2 for alpha = 0, j for alpha > 0)
// kept separate.
struct SpectralBlock {
  int j = 1;
  double scale = 0.5;
  std::array<std::array<double, 2>, 2> m{};

  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

// Point-vortex angular velocity of the N-fold configuration.
double omega_star(double alpha, int n_fold, double d);

// Point-vortex translation speed of the mirror pair.
double w_star(double alpha, double d);

SpectralBlock m_block(double alpha, double gamma, double b, int j);

// det(M_j) for j = 2 .. j_max.
std::vector<double> det_profile(double alpha, double gamma, double b,
                                int j_max);

struct AdmissibleInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Sub-intervals of the sampled grid where all blocks up to j_max are safely
// invertible (and, for alpha > 0 with gamma in [0,1), where the sufficient
// smallness conditions on b hold). gamma = 0 at alpha = 0 yields an empty
// result: the blocks are invertible but the constrained inverse leaves the
// perturbation space.
std::vector<AdmissibleInterval> invertible_b_scan(
    double alpha, double gamma, int j_max, const std::vector<double>& b_grid);

bool b_admissible(double alpha, double gamma, double b, int j_max);

// Mode-wise application of the eps = 0 linearization: scale_j M_j (a_j b_j)^t
// as sine coefficients.
contour::SineResidual linearized_apply(double alpha, double gamma, double b,
                                       const contour::FourierPair& h);

// Mode-wise inverse on the constrained range: blocks for j >= 2, the
// rank-one j = 1 pair through the linking relation. Input must satisfy the
// first-mode link; output satisfies the cosine-side link exactly.
contour::FourierPair block_precondition(double alpha, double gamma, double b,
                                        const contour::SineResidual& r);

}  // namespace vstates::spectral
