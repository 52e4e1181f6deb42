#include "opolab/opo.hpp"

#include <cmath>
#include <stdexcept>

namespace opolab::opo {

namespace {

void require_couplings(double T, double L) {
  if (!(T > 0.0 && T <= 1.0) || !(L >= 0.0 && L < 1.0) || !(T + L <= 1.0)) {
    throw std::domain_error(
        "cavity couplings need 0 < T <= 1, 0 <= L < 1 and T + L <= 1 "
        "(fractional round-trip values)");
  }
}

}  // namespace

double escape_efficiency(double T, double L) {
  require_couplings(T, L);
  return T / (T + L);
}

double pump_parameter(double pump_mw, double threshold_mw) {
  if (!(threshold_mw > 0.0) || pump_mw < 0.0) {
    throw std::domain_error("pump_parameter: need threshold > 0, pump >= 0");
  }
  if (pump_mw >= threshold_mw) {
    throw std::domain_error(
        "pump_parameter: pump at or above threshold; the below-threshold "
        "model does not apply");
  }
  return std::sqrt(pump_mw / threshold_mw);
}

double cavity_halfwidth_hz(double fsr_hz, double T, double L) {
  require_couplings(T, L);
  if (!(fsr_hz > 0.0)) {
    throw std::domain_error("cavity_halfwidth_hz: need fsr > 0");
  }
  const double finesse = 2.0 * M_PI / (T + L);
  const double fwhm = fsr_hz / finesse;
  return 0.5 * fwhm;
}

double squeezing_parameter(double sigma) {
  if (!(sigma >= 0.0 && sigma < 1.0)) {
    throw std::domain_error("squeezing_parameter: need 0 <= sigma < 1");
  }
  return std::log((1.0 + sigma) / (1.0 - sigma));
}

namespace {

double spectrum(double omega_hz, double sigma, double gamma_hz,
                double eta_total, double sign) {
  if (!(sigma >= 0.0 && sigma < 1.0)) {
    throw std::domain_error("spectrum: need 0 <= sigma < 1");
  }
  if (!(gamma_hz > 0.0)) throw std::domain_error("spectrum: need gamma > 0");
  if (!(eta_total >= 0.0 && eta_total <= 1.0)) {
    throw std::domain_error("spectrum: need eta_total in [0, 1]");
  }
  // The squeezed branch narrows around (1 + sigma)^2 while the antisqueezed
  // branch diverges near threshold with (1 - sigma)^2 in the denominator.
  const double detuning = omega_hz / gamma_hz;
  const double lorentz =
      4.0 * sigma / ((1.0 - sign * sigma) * (1.0 - sign * sigma) +
                     detuning * detuning);
  return 1.0 + sign * eta_total * lorentz;
}

}  // namespace

double squeezed_spectrum(double omega_hz, double sigma, double gamma_hz,
                         double eta_total) {
  return spectrum(omega_hz, sigma, gamma_hz, eta_total, -1.0);
}

double antisqueezed_spectrum(double omega_hz, double sigma, double gamma_hz,
                             double eta_total) {
  return spectrum(omega_hz, sigma, gamma_hz, eta_total, +1.0);
}

double variance_to_db(double linear_variance) {
  if (!(linear_variance > 0.0)) {
    throw std::domain_error("variance_to_db: variance must be positive");
  }
  return 10.0 * std::log10(linear_variance);
}

SqueezingSpectrumPoint squeezing_spectrum_point(double omega_hz, double sigma,
                                                double gamma_hz,
                                                double eta_total) {
  SqueezingSpectrumPoint point;
  point.omega_hz = omega_hz;
  point.s_minus = squeezed_spectrum(omega_hz, sigma, gamma_hz, eta_total);
  point.s_plus = antisqueezed_spectrum(omega_hz, sigma, gamma_hz, eta_total);
  point.s_minus_db = variance_to_db(point.s_minus);
  point.s_plus_db = variance_to_db(point.s_plus);
  return point;
}

double electronic_noise_equivalent_loss(double clearance_db) {
  if (!(clearance_db >= 0.0)) {
    throw std::domain_error("electronic_noise_equivalent_loss: need dB >= 0");
  }
  return std::pow(10.0, -clearance_db / 10.0);
}

double visibility_to_efficiency(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::domain_error("visibility_to_efficiency: need V in [0, 1]");
  }
  return visibility * visibility;
}

fock::TwoModeState two_mode_squeezed_vacuum(double lambda, int dim,
                                            TruncationReport* report) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::domain_error("two_mode_squeezed_vacuum: need 0 <= lambda < 1");
  }
  if (dim < 2) {
    throw std::invalid_argument("two_mode_squeezed_vacuum: need dim >= 2");
  }
  fock::Matrix coeffs = fock::Matrix::Zero(dim, dim);
  double amp = 1.0;  // lambda^n before overall normalization
  for (int n = 0; n < dim; ++n) {
    coeffs(n, n) = amp;
    amp *= lambda;
  }
  const double tail = std::pow(lambda, 2.0 * dim);  // sum_{n >= dim} lam^2n / sum
  fock::TwoModeState state(std::move(coeffs));
  state.normalize();
  if (report != nullptr) {
    report->tail_bound = tail;
    if (tail >= 1e-8) {
      report->warnings.push_back(
          "two-mode squeezed vacuum truncation discards probability ~" +
          std::to_string(tail) + "; raise the photon-number cutoff");
    }
  }
  return state;
}

fock::Vector squeezed_vacuum_ket(double r, int dim, TruncationReport* report) {
  if (!(r >= 0.0)) {
    throw std::domain_error("squeezed_vacuum_ket: need r >= 0");
  }
  if (dim < 1) {
    throw std::invalid_argument("squeezed_vacuum_ket: need dim >= 1");
  }
  fock::Vector ket = fock::Vector::Zero(dim);
  const double th = std::tanh(r);
  // c_{2m} / c_{2m-2} = -tanh(r) sqrt((2m - 1) / (2m))
  double c = 1.0;  // relative amplitude of |0>
  double norm_sq = 0.0;
  for (int m = 0; 2 * m < dim; ++m) {
    if (m > 0) c *= -th * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
    ket(2 * m) = c;
    norm_sq += c * c;
  }
  ket /= std::sqrt(norm_sq);
  if (report != nullptr) {
    // Successive even amplitudes shrink by factors approaching tanh r, so
    // tanh(r)^N bounds the discarded amplitude tail at cutoff N.
    const double tail = std::pow(th, dim - 1);
    report->tail_bound = tail;
    if (tail >= 1e-8) {
      report->warnings.push_back(
          "squeezed vacuum truncation tail ~" + std::to_string(tail) +
          "; raise the photon-number cutoff");
    }
  }
  return ket;
}

}  // namespace opolab::opo
