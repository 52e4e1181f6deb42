#pragma once

#include <string>
#include <vector>

#include "opolab/fock.hpp"

namespace opolab::opo {

/// Fraction of intracavity photons leaving through the output coupler:
/// T / (T + L) for coupler transmission T and round-trip parasitic loss L.
double escape_efficiency(double T, double L);

/// Normalized pump amplitude sigma = sqrt(P / P_th). Defined below
/// threshold only; P >= P_th is a physics-domain error.
double pump_parameter(double pump_mw, double threshold_mw);

/// Cavity half width at half maximum in Hz: finesse = 2 pi / (T + L),
/// FWHM = FSR / finesse, and the half width is FWHM / 2.
double cavity_halfwidth_hz(double fsr_hz, double T, double L);

/// Squeezing parameter of the output field at zero sideband frequency for
/// pump parameter sigma: r = ln((1 + sigma) / (1 - sigma)), i.e. the
/// squeezed output variance is (1/2) ((1 - sigma)/(1 + sigma))^2.
double squeezing_parameter(double sigma);

/// Single-sided squeezing spectra relative to shot noise, as linear
/// variances: S_-(Omega) = 1 - eta_total 4 sigma / ((1+sigma)^2 + (Omega/gamma)^2)
/// and S_+(Omega) = 1 + eta_total 4 sigma / ((1-sigma)^2 + (Omega/gamma)^2),
/// with gamma the cavity half width (same unit as Omega).
double squeezed_spectrum(double omega_hz, double sigma, double gamma_hz,
                         double eta_total);
double antisqueezed_spectrum(double omega_hz, double sigma, double gamma_hz,
                             double eta_total);

/// dB relative to shot noise; negative = below shot noise.
double variance_to_db(double linear_variance);

/// Both quadrature variances at one analysis frequency, linear and in dB.
/// Satisfies s_minus <= 1 <= s_plus and s_minus * s_plus >= 1 for any
/// eta_total <= 1.
struct SqueezingSpectrumPoint {
  double omega_hz = 0.0;
  double s_minus = 1.0;
  double s_plus = 1.0;
  double s_minus_db = 0.0;
  double s_plus_db = 0.0;
};

SqueezingSpectrumPoint squeezing_spectrum_point(double omega_hz, double sigma,
                                                double gamma_hz,
                                                double eta_total);

/// A shot-noise clearance of c dB above the electronic-noise floor acts
/// like an extra loss of 10^(-c/10).
double electronic_noise_equivalent_loss(double clearance_db);

/// Mode-matching visibility V contributes V^2 to the detection efficiency.
double visibility_to_efficiency(double visibility);

struct TruncationReport {
  double tail_bound = 0.0;  // probability mass above the cutoff (bound)
  std::vector<std::string> warnings;
};

/// Two-mode squeezed vacuum sqrt(1 - lambda^2) sum lambda^n |n, n>,
/// renormalized on the truncated space. Warns when the discarded tail
/// lambda^(2 (N + 1)) reaches 1e-8.
fock::TwoModeState two_mode_squeezed_vacuum(double lambda, int dim,
                                            TruncationReport* report = nullptr);

/// Squeezed-vacuum ket with even-photon amplitudes
/// c_2m = (-tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r),
/// computed by the stable ratio recurrence and renormalized on the
/// truncated space.
fock::Vector squeezed_vacuum_ket(double r, int dim,
                                 TruncationReport* report = nullptr);

}  // namespace opolab::opo
