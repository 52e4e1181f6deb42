#pragma once

#include <string>
#include <vector>

#include "opolab/fock.hpp"

namespace opolab::channels {

/// Pure-loss (beam-splitter-to-environment) channel with transmission eta,
/// 0 <= eta <= 1. Exactly trace preserving on the truncated space because
/// loss never raises photon number.
fock::DensityMatrix loss_apply(const fock::DensityMatrix& rho, double eta);

struct LossInversionResult {
  fock::DensityMatrix state;
  double clipped_mass = 0.0;
  std::vector<std::string> warnings;
};

/// Inverts loss_apply(., eta) on the truncated space by per-diagonal
/// back-substitution from the highest occupation down, then projects onto
/// the physical cone (PSD clip + renormalize). Refuses eta <= 0.5, where
/// the inversion amplifies truncation and statistical noise without bound.
/// Clipped mass above 5% is reported as a warning: the inverted state is
/// then dominated by noise rather than signal.
LossInversionResult loss_invert(const fock::DensityMatrix& rho, double eta);

/// Heisenberg-picture (adjoint) action of the loss channel on a POVM
/// element: measuring pi after a transmission eta is equivalent to
/// measuring loss_adjoint(pi, eta) on the lossless state. Unital, so POVM
/// completeness is preserved.
fock::Matrix loss_adjoint(const fock::Matrix& povm_element, double eta);

/// sqrt(binomial(n, k)) table rows n = 0..n_max; shared by the loss maps
/// and the photon-subtraction tap.
Eigen::MatrixXd sqrt_binomial_table(int n_max);

}  // namespace opolab::channels
