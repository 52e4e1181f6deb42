#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace opolab::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Quadrature convention, read by every module: vacuum quadrature variance
// is 1/2 and [x, p] = i, i.e. x = (a + a^dag)/sqrt(2). The vacuum pdf is
// Normal(0, 1/2) and squeezing in dB is always quoted against it.
inline constexpr double kVacuumVariance = 0.5;

struct NormalizeReport {
  double trace_before = 0.0;
  double clipped_mass = 0.0;  // total negative eigenvalue mass set to zero
};

/// Density operator on a truncated Fock space {|0>, ..., |N>}.
/// dim() == N + 1. Hermitian, unit trace and PSD after normalize().
class DensityMatrix {
 public:
  DensityMatrix() : elements_(Matrix::Identity(1, 1)) {}  // 1x1 vacuum
  explicit DensityMatrix(int dim) : elements_(Matrix::Zero(dim, dim)) {}
  explicit DensityMatrix(Matrix elements);

  static DensityMatrix vacuum(int dim);
  static DensityMatrix fock_state(int n, int dim);
  static DensityMatrix from_ket(const Vector& ket);
  static DensityMatrix from_populations(const std::vector<double>& populations);

  int dim() const { return static_cast<int>(elements_.rows()); }
  const Matrix& matrix() const { return elements_; }
  Matrix& matrix() { return elements_; }
  Complex operator()(int m, int n) const { return elements_(m, n); }

  double trace_real() const { return elements_.trace().real(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;

  /// Symmetrizes, clips negative eigenvalues to zero and rescales to unit
  /// trace. Negative mass only absorbs rounding; it is reported so callers
  /// can flag suspicious inversions.
  NormalizeReport normalize();

  /// Throws std::invalid_argument when |trace - 1| > tol.
  void require_normalized(double tol = 1e-6) const;

  /// Zero-padded copy at a larger cutoff.
  DensityMatrix padded(int dim) const;

  std::string to_json() const;
  static DensityMatrix from_json_text(const std::string& text);

 private:
  Matrix elements_;
};

/// Pure two-mode state as the coefficient matrix c(i, j) = <i, j|psi>,
/// first index = kept (signal) mode, second = heralding (idler/tap) mode.
class TwoModeState {
 public:
  explicit TwoModeState(Matrix coefficients);

  int dim() const { return static_cast<int>(coefficients_.rows()); }
  const Matrix& coefficients() const { return coefficients_; }
  double norm() const { return coefficients_.norm(); }
  void normalize() { coefficients_ /= coefficients_.norm(); }

  /// Partial trace over the heralding mode.
  DensityMatrix reduce_signal() const;

 private:
  Matrix coefficients_;
};

/// Harmonic-oscillator eigenfunction psi_n(x) under the convention above,
/// psi_0(x) = pi^(-1/4) exp(-x^2/2). Evaluated by the two-term upward
/// recurrence on psi itself, which stays bounded for n <= 100, |x| <= 20.
/// n_max is the configurable admissible photon-number ceiling.
double hermite_wavefunction(int n, double x, int n_max = 30);

/// psi_0(x) ... psi_n(x) in one recurrence pass.
Eigen::VectorXd wavefunction_column(int n, double x);

/// p(x | theta) = sum_{m,n} rho_mn exp(i(n-m)theta) psi_m(x) psi_n(x).
/// rho must be normalized (trace within 1e-6 of 1).
double quadrature_pdf(const DensityMatrix& rho, double theta, double x);

/// Wigner function at one phase-space point, via the Fock-basis Laguerre
/// expansion. Normalized so the double integral over the plane is 1;
/// vacuum gives 1/pi at the origin.
double wigner_point(const DensityMatrix& rho, double x, double p);

struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ps;
  Eigen::MatrixXd values;  // values(i, j) = W(xs[i], ps[j])

  double integral() const;
  std::string to_csv() const;  // header "x,p,w"
};

WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& xs,
                  const std::vector<double>& ps);
WignerGrid wigner_square_grid(const DensityMatrix& rho, double half_extent,
                              int points_per_axis);

/// <t|rho|t> for a pure target ket. Cutoff mismatch is resolved by
/// zero-padding the smaller operand.
double fidelity(const DensityMatrix& rho, const Vector& target_ket);

/// Tr[rho sigma]; valid as a fidelity only when at least one operand is
/// pure (checked via Tr[.^2]). Mixed-mixed Uhlmann fidelity is out of
/// scope and rejected.
double fidelity(const DensityMatrix& rho, const DensityMatrix& target);

struct PhotonStatistics {
  std::vector<double> populations;  // p_n = rho_nn
  double mean_photon = 0.0;
  double parity = 0.0;  // sum (-1)^n p_n
};

PhotonStatistics photon_statistics(const DensityMatrix& rho);

}  // namespace opolab::fock
