#include "opolab/herald.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "opolab/channels.hpp"

namespace opolab::herald {

using fock::Complex;
using fock::DensityMatrix;
using fock::Matrix;
using fock::Vector;

double false_click_fraction(double dark_rate_hz, double click_rate_hz) {
  if (dark_rate_hz < 0.0 || click_rate_hz < 0.0 ||
      !(dark_rate_hz + click_rate_hz > 0.0)) {
    throw std::domain_error(
        "false_click_fraction: rates must be non-negative and not both zero");
  }
  return dark_rate_hz / (dark_rate_hz + click_rate_hz);
}

Eigen::VectorXd click_povm_diagonal(double eta_h, int dim) {
  if (!(eta_h >= 0.0 && eta_h <= 1.0)) {
    throw std::domain_error("click_povm_diagonal: eta_h must lie in [0, 1]");
  }
  if (dim < 1) throw std::invalid_argument("click_povm_diagonal: dim < 1");
  Eigen::VectorXd diag(dim);
  double noclick = 1.0;  // (1 - eta_h)^n
  for (int n = 0; n < dim; ++n) {
    diag(n) = 1.0 - noclick;
    noclick *= 1.0 - eta_h;
  }
  return diag;
}

namespace {

void require_fraction(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::domain_error("false-click fraction must lie in [0, 1]");
  }
}

}  // namespace

HeraldResult herald_single_photon(const fock::TwoModeState& state,
                                  double eta_h, double w) {
  if (!(eta_h > 0.0 && eta_h <= 1.0)) {
    throw std::domain_error("herald_single_photon: eta_h must lie in (0, 1]");
  }
  require_fraction(w);
  if (std::abs(state.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument(
        "herald_single_photon: two-mode state is not normalized");
  }

  const Matrix& c = state.coefficients();
  const int dim = state.dim();
  const Eigen::VectorXd click = click_povm_diagonal(eta_h, dim);

  Matrix conditioned = c * click.asDiagonal() * c.adjoint();
  const double p_true = conditioned.trace().real();
  Matrix unconditioned = c * c.adjoint();

  HeraldResult result;
  result.true_click_probability = p_true;
  if (w >= 1.0) {
    // Pure dark counts: heralds carry no information, the signal mode
    // stays in its reduced (thermal) state.
    result.state = DensityMatrix(std::move(unconditioned));
    result.success_probability = std::numeric_limits<double>::infinity();
    result.warnings.push_back(
        "every herald is spurious (w = 1); success probability is undefined");
    return result;
  }
  if (p_true < 1e-300) {
    if (w <= 0.0) {
      throw std::domain_error(
          "herald_single_photon: the detector can never click on this state");
    }
    result.warnings.push_back(
        "herald never truly clicks; every observed herald is spurious and "
        "delivers the unconditioned state");
    result.state = DensityMatrix(std::move(unconditioned));
    result.success_probability = 0.0;
    return result;
  }

  Matrix mixed = (1.0 - w) * (conditioned / p_true) + w * unconditioned;
  result.state = DensityMatrix(std::move(mixed));
  // Observed heralds = true clicks inflated by the spurious fraction.
  result.success_probability = p_true / (1.0 - w);
  return result;
}

namespace {

/// Weak-tap map with detector-weighted tapped photons:
/// M(kappa)(rho)_ab = sum_k sqrt(C(a+k,k) C(b+k,k)) t^(a+b) (R kappa)^k
///                    rho_(a+k, b+k),   t = sqrt(1 - R).
/// kappa = 1 recovers plain loss at transmission 1 - R; kappa = 1 - eta_h
/// keeps only tap events the detector misses.
Matrix tap_map(const DensityMatrix& rho, double reflectivity, double kappa) {
  const int dim = rho.dim();
  const Eigen::MatrixXd sqrt_binom = channels::sqrt_binomial_table(dim - 1);
  const double t = std::sqrt(1.0 - reflectivity);
  Eigen::VectorXd t_pow(dim), rk_pow(dim);
  for (int n = 0; n < dim; ++n) {
    t_pow(n) = std::pow(t, n);
    rk_pow(n) = std::pow(reflectivity * kappa, n);
  }
  Matrix out = Matrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      Complex acc = 0.0;
      for (int k = 0; k <= dim - 1 - b; ++k) {
        acc += sqrt_binom(a + k, k) * sqrt_binom(b + k, k) * rk_pow(k) *
               rho(a + k, b + k);
      }
      acc *= t_pow(a) * t_pow(b);
      out(a, b) = acc;
      if (b != a) out(b, a) = std::conj(acc);
    }
  }
  return out;
}

}  // namespace

SubtractionResult subtract_photon(const fock::DensityMatrix& rho,
                                  double tap_reflectivity, double eta_h,
                                  double w) {
  if (!(tap_reflectivity >= 0.0 && tap_reflectivity <= 0.5)) {
    throw std::domain_error(
        "subtract_photon: tap reflectivity must lie in [0, 0.5] (a tap, not "
        "a splitter); R = 0 degenerates to click probability 0");
  }
  if (!(eta_h > 0.0 && eta_h <= 1.0)) {
    throw std::domain_error("subtract_photon: eta_h must lie in (0, 1]");
  }
  require_fraction(w);
  rho.require_normalized(1e-6);

  Matrix after_tap = tap_map(rho, tap_reflectivity, 1.0);
  Matrix missed = tap_map(rho, tap_reflectivity, 1.0 - eta_h);
  Matrix clicked = after_tap - missed;

  SubtractionResult result;
  result.reference = DensityMatrix(after_tap);
  result.click_probability = clicked.trace().real();
  if (result.click_probability < 1e-300) {
    result.warnings.push_back(
        "tap detector never truly clicks (vacuum input or zero tap); "
        "returning the tap-only state with click probability 0");
    result.state = result.reference;
    result.click_probability = 0.0;
    return result;
  }
  if (w >= 1.0) {
    result.state = result.reference;
    result.warnings.push_back(
        "every click is spurious (w = 1); output is the tap-only state");
    return result;
  }
  Matrix mixed = (1.0 - w) * (clicked / result.click_probability) +
                 w * after_tap;
  result.state = DensityMatrix(std::move(mixed));
  return result;
}

fock::DensityMatrix annihilate(const fock::DensityMatrix& rho) {
  const int dim = rho.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (int a = 0; a + 1 < dim; ++a) {
    for (int b = 0; b + 1 < dim; ++b) {
      out(a, b) = std::sqrt((a + 1.0) * (b + 1.0)) * rho(a + 1, b + 1);
    }
  }
  const double mean_photon = out.trace().real();
  if (mean_photon < 1e-300) {
    throw std::domain_error("annihilate: state has no photons to subtract");
  }
  return DensityMatrix(out / mean_photon);
}

fock::Vector odd_cat_ket(double alpha, int dim) {
  if (!(alpha > 0.0)) throw std::domain_error("odd_cat_ket: need alpha > 0");
  if (dim < 2) throw std::invalid_argument("odd_cat_ket: need dim >= 2");
  Vector ket = Vector::Zero(dim);
  // Unnormalized coherent amplitudes alpha^n / sqrt(n!), odd n only.
  double amp = alpha;  // n = 1
  double norm_sq = 0.0;
  for (int n = 1; n < dim; n += 2) {
    ket(n) = amp;
    norm_sq += amp * amp;
    amp *= alpha * alpha / std::sqrt((n + 1.0) * (n + 2.0));
  }
  if (!(norm_sq > 0.0)) {
    throw std::domain_error("odd_cat_ket: amplitudes underflowed");
  }
  ket /= std::sqrt(norm_sq);
  return ket;
}

CssFit best_css_fit(const fock::DensityMatrix& rho) {
  rho.require_normalized(1e-6);
  const int ket_dim = std::max(rho.dim(), 40);
  // The cat amplitude is reported as a real magnitude; its phase-space
  // orientation is matched to the state. For density matrices that are real
  // in the Fock basis (everything this pipeline prepares), the overlap is
  // stationary in the orientation angle exactly on the two principal
  // quadrature axes, so evaluating both axes captures the optimum. The
  // 90-degree-rotated odd cat equals the axis-aligned one with the sign of
  // every n = 3 (mod 4) amplitude flipped, up to a global phase.
  const auto score = [&](double alpha) {
    fock::Vector cat = odd_cat_ket(alpha, ket_dim);
    const double aligned = fock::fidelity(rho, cat);
    for (int n = 3; n < ket_dim; n += 4) cat(n) = -cat(n);
    return std::max(aligned, fock::fidelity(rho, cat));
  };

  constexpr double kLo = 0.01;
  constexpr double kHi = 3.0;
  constexpr double kStep = 0.01;

  double best_alpha = kLo;
  double best_value = score(kLo);
  bool best_is_first = true;
  for (double alpha = kLo + kStep; alpha <= kHi + 1e-12; alpha += kStep) {
    const double value = score(alpha);
    if (value > best_value) {
      best_value = value;
      best_alpha = alpha;
      best_is_first = false;
    }
  }

  // Golden-section refinement inside the bracketing coarse interval.
  double lo = std::max(kLo, best_alpha - kStep);
  double hi = std::min(kHi, best_alpha + kStep);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = score(x1);
  double f2 = score(x2);
  while (hi - lo > 1e-4) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = score(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = score(x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_value = score(refined);

  CssFit fit;
  if (refined_value >= best_value) {
    fit.alpha = refined;
    fit.fidelity = refined_value;
  } else {
    fit.alpha = best_alpha;
    fit.fidelity = best_value;
  }
  fit.at_scan_edge = best_is_first;
  return fit;
}

}  // namespace opolab::herald
