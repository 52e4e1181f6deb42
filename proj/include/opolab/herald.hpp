#pragma once

#include <string>
#include <vector>

#include "opolab/fock.hpp"

namespace opolab::herald {

/// Fraction of heralds that are spurious,
/// w = dark_rate / (dark_rate + true_click_rate).
double false_click_fraction(double dark_rate_hz, double click_rate_hz);

/// Diagonal of the non-number-resolving click POVM for a detector of
/// efficiency eta_h: p(click | n) = 1 - (1 - eta_h)^n.
Eigen::VectorXd click_povm_diagonal(double eta_h, int dim);

struct HeraldResult {
  fock::DensityMatrix state;      // heralded signal state, normalized
  double success_probability = 0.0;  // observed herald probability per trial
  double true_click_probability = 0.0;
  std::vector<std::string> warnings;
};

/// Conditions the signal mode of a pure two-mode state on a click of an
/// imperfect detector (efficiency eta_h) watching the other mode. A
/// fraction w in [0, 1] of observed clicks is spurious; those heralds
/// deliver the unconditioned signal state instead (w = 1 returns exactly
/// the reduced state, with undefined success probability).
HeraldResult herald_single_photon(const fock::TwoModeState& state,
                                  double eta_h, double w);

struct SubtractionResult {
  fock::DensityMatrix state;      // click-conditioned state, normalized
  fock::DensityMatrix reference;  // tap-only state (what a false click delivers)
  double click_probability = 0.0;     // true-click probability
  std::vector<std::string> warnings;
};

/// Photon subtraction by a weak tap: reflectivity R in [0, 0.5] diverts
/// photons to a click detector of efficiency eta_h; a click heralds the
/// subtracted state. A fraction w of clicks is spurious and delivers the
/// tap-only (unconditioned) state. Vacuum input or R = 0 degenerates to
/// the tap-only state with click probability 0.
SubtractionResult subtract_photon(const fock::DensityMatrix& rho,
                                  double tap_reflectivity, double eta_h,
                                  double w);

/// Normalized a rho a^dag: the ideal single-photon-subtraction limit of
/// the weak tap (R -> 0, perfect detector). Rejects states with zero mean
/// photon number.
fock::DensityMatrix annihilate(const fock::DensityMatrix& rho);

/// Odd coherent-state superposition |alpha> - |-alpha>, normalized on the
/// truncated space. alpha -> 0 tends to the one-photon state.
fock::Vector odd_cat_ket(double alpha, int dim);

struct CssFit {
  double alpha = 0.0;
  double fidelity = 0.0;
  bool at_scan_edge = false;  // optimum pinned at the smallest scanned alpha
};

/// Best fidelity between rho and an odd coherent-state superposition,
/// scanning alpha over [0.01, 3] and refining by golden-section search to
/// 1e-4. A maximum at the lower scan edge means the fit has degenerated to
/// the one-photon state (flat small-alpha plateau), flagged in the result.
CssFit best_css_fit(const fock::DensityMatrix& rho);

}  // namespace opolab::herald
