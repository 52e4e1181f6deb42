#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opolab/fock.hpp"
#include "opolab/homodyne.hpp"

namespace opolab::tomo {

/// Binned phase/quadrature data. Phase bins are uniform over
/// [phase_min, phase_max]; x bins are uniform, aligned on multiples of
/// x_bin_width, and wide enough to cover every sample.
struct Histogram {
  double phase_min = 0.0;
  double phase_max = M_PI;
  int n_phase_bins = 36;
  double x_min = -9.0;
  double x_bin_width = 0.05;
  int n_x_bins = 0;
  Eigen::MatrixXd counts;  // (phase bin, x bin)
  std::vector<std::string> warnings;

  double total() const { return counts.sum(); }
  double phase_center(int i) const;
  double x_center(int j) const;

  static Histogram from_events(const std::vector<homodyne::SampleEvent>& events,
                               int n_phase_bins, double x_bin_width,
                               double phase_min, double phase_max,
                               double min_half_range = 9.0);

  /// Same binning geometry as `like`, counts taken from `events`.
  static Histogram from_events_like(
      const std::vector<homodyne::SampleEvent>& events, const Histogram& like);
};

/// Quadrature-projector POVM element at one (theta, x) point,
/// Pi(m, n) = exp(i (n - m) theta) psi_m(x) psi_n(x) dx. With eta < 1 the
/// loss-channel adjoint is applied, so expectation values against the
/// lossless state reproduce lossy detection. eta <= 0.5 is refused (the
/// implied correction amplifies noise unboundedly).
fock::Matrix povm_element(double theta, double x, double eta, int cutoff,
                          double dx);

struct MleOptions {
  int cutoff = 10;           // reconstruction space is {|0>, ..., |cutoff>}
  double eta = 1.0;          // detection efficiency folded into the POVM
  int max_iterations = 5000;
  double element_tol = 1e-9;      // stop on max elementwise change
  double likelihood_tol = 1e-10;  // stop on mean log-likelihood gain
};

struct MleResult {
  fock::DensityMatrix rho{1};
  std::vector<double> likelihood_trace;  // mean log-likelihood per iteration
  int iterations = 0;
  bool converged = false;
  double eta = 1.0;  // efficiency assumed in the POVM (1 = uncorrected)
  std::string stop_reason;
  std::vector<std::string> warnings;
};

/// Iterative maximum-likelihood reconstruction: rho <- N[R rho R] with
/// R = (1/M) sum_bins count * Pi / Tr(Pi rho), started from the maximally
/// mixed state. Stops on elementwise change < element_tol, likelihood gain
/// < likelihood_tol, or the iteration cap (converged = false).
MleResult mle_reconstruct(const Histogram& histogram, const MleOptions& options,
                          const fock::DensityMatrix* warm_start = nullptr);

struct BootstrapOptions {
  int replicas = 25;
  int max_iterations = 400;
  std::uint64_t seed = 1;
};

struct BootstrapSummary {
  int replicas = 0;
  std::vector<double> population_mean;
  std::vector<double> population_std;
  double parity_mean = 0.0;
  double parity_std = 0.0;
  double w00_mean = 0.0;
  double w00_std = 0.0;
};

/// Nonparametric bootstrap: acquisition segments are resampled with
/// replacement, each replica re-binned with the point estimate's geometry
/// and re-fitted warm-started from the point estimate; the spread of the
/// derived quantities gives their statistical error bars.
BootstrapSummary bootstrap_mle(const std::vector<homodyne::SampleEvent>& events,
                               const Histogram& geometry,
                               const MleOptions& options,
                               const MleResult& point_estimate,
                               const BootstrapOptions& bootstrap);

}  // namespace opolab::tomo
