#include "opolab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "opolab/channels.hpp"
#include "opolab/errors.hpp"
#include "opolab/rng.hpp"

namespace opolab::tomo {

using fock::Complex;
using fock::Matrix;

double Histogram::phase_center(int i) const {
  const double width = (phase_max - phase_min) / n_phase_bins;
  return phase_min + (i + 0.5) * width;
}

double Histogram::x_center(int j) const {
  return x_min + (j + 0.5) * x_bin_width;
}

namespace {

void fill_counts(Histogram& h, const std::vector<homodyne::SampleEvent>& events) {
  const double phase_width = (h.phase_max - h.phase_min) / h.n_phase_bins;
  for (const auto& ev : events) {
    if (!std::isfinite(ev.x) || !std::isfinite(ev.phase_rad)) {
      throw std::invalid_argument("Histogram: non-finite sample");
    }
    int i = static_cast<int>((ev.phase_rad - h.phase_min) / phase_width);
    i = std::clamp(i, 0, h.n_phase_bins - 1);
    int j = static_cast<int>((ev.x - h.x_min) / h.x_bin_width);
    j = std::clamp(j, 0, h.n_x_bins - 1);
    h.counts(i, j) += 1.0;
  }
  for (int i = 0; i < h.n_phase_bins; ++i) {
    if (h.counts.row(i).sum() < 100.0) {
      h.warnings.push_back(
          "phase bin " + std::to_string(i) +
          " holds fewer than 100 samples; its quadrature histogram is noisy");
    }
  }
}

}  // namespace

Histogram Histogram::from_events(
    const std::vector<homodyne::SampleEvent>& events, int n_phase_bins,
    double x_bin_width, double phase_min, double phase_max,
    double min_half_range) {
  if (events.empty()) throw std::invalid_argument("Histogram: no samples");
  if (n_phase_bins < 1 || !(x_bin_width > 0.0) || !(phase_max > phase_min) ||
      !(min_half_range > 0.0)) {
    throw std::invalid_argument("Histogram: invalid binning request");
  }
  double max_abs = 0.0;
  for (const auto& ev : events) max_abs = std::max(max_abs, std::abs(ev.x));

  Histogram h;
  h.phase_min = phase_min;
  h.phase_max = phase_max;
  h.n_phase_bins = n_phase_bins;
  h.x_bin_width = x_bin_width;
  const int half_bins = static_cast<int>(
      std::ceil(std::max(min_half_range, max_abs + 1.0) / x_bin_width));
  h.n_x_bins = 2 * half_bins;
  h.x_min = -half_bins * x_bin_width;
  h.counts = Eigen::MatrixXd::Zero(n_phase_bins, h.n_x_bins);
  fill_counts(h, events);
  return h;
}

Histogram Histogram::from_events_like(
    const std::vector<homodyne::SampleEvent>& events, const Histogram& like) {
  Histogram h = like;
  h.counts.setZero();
  h.warnings.clear();
  fill_counts(h, events);
  return h;
}

fock::Matrix povm_element(double theta, double x, double eta, int cutoff,
                          double dx) {
  if (cutoff < 0) throw std::invalid_argument("povm_element: cutoff < 0");
  if (!(dx > 0.0)) throw std::invalid_argument("povm_element: dx <= 0");
  if (!(eta > 0.5 && eta <= 1.0)) {
    throw std::domain_error(
        "povm_element: eta must lie in (0.5, 1]; below that the loss "
        "correction amplifies noise unboundedly");
  }
  const Eigen::VectorXd psi = fock::wavefunction_column(cutoff, x);
  fock::Vector v(cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) {
    v(m) = psi(m) * std::exp(Complex(0.0, -m * theta));
  }
  Matrix pi = dx * (v * v.adjoint());
  if (eta < 1.0) pi = channels::loss_adjoint(pi, eta);
  return pi;
}

namespace {

/// Phase-independent real factors of the POVM: b_j = dx psi(x_j) psi(x_j)^T,
/// smeared by the loss adjoint when eta < 1. The element at phase theta is
/// recovered by conjugating with diag(exp(i n theta)).
std::vector<Eigen::MatrixXd> build_povm_bins(const Histogram& h, int dim,
                                             double eta) {
  std::vector<Eigen::MatrixXd> bins;
  bins.reserve(static_cast<std::size_t>(h.n_x_bins));
  for (int j = 0; j < h.n_x_bins; ++j) {
    const Eigen::VectorXd psi =
        fock::wavefunction_column(dim - 1, h.x_center(j));
    Eigen::MatrixXd b = h.x_bin_width * (psi * psi.transpose());
    if (eta < 1.0) {
      b = channels::loss_adjoint(b.cast<Complex>(), eta).real();
    }
    bins.push_back(std::move(b));
  }
  return bins;
}

}  // namespace

MleResult mle_reconstruct(const Histogram& histogram, const MleOptions& options,
                          const fock::DensityMatrix* warm_start) {
  if (options.cutoff < 1) {
    throw std::invalid_argument("mle_reconstruct: cutoff must be >= 1");
  }
  if (!(options.eta > 0.5 && options.eta <= 1.0)) {
    throw std::domain_error(
        "mle_reconstruct: eta must lie in (0.5, 1]; below that the loss "
        "correction amplifies noise unboundedly");
  }
  const double total = histogram.total();
  if (!(total > 0.0)) {
    throw std::invalid_argument("mle_reconstruct: histogram has no counts");
  }
  const int dim = options.cutoff + 1;

  MleResult result;
  result.eta = options.eta;
  const std::vector<Eigen::MatrixXd> bins =
      build_povm_bins(histogram, dim, options.eta);

  // Flatten the phase-free POVM parts for fast probability evaluation.
  Eigen::MatrixXd bins_flat(histogram.n_x_bins, dim * dim);
  for (int j = 0; j < histogram.n_x_bins; ++j) {
    bins_flat.row(j) = Eigen::Map<const Eigen::VectorXd>(
        bins[static_cast<std::size_t>(j)].data(), dim * dim);
  }

  // Per-phase-bin rotation factors E_i(m, n) = exp(i (m - n) theta_i).
  std::vector<Matrix> rotations;
  rotations.reserve(static_cast<std::size_t>(histogram.n_phase_bins));
  for (int i = 0; i < histogram.n_phase_bins; ++i) {
    const double theta = histogram.phase_center(i);
    fock::Vector d(dim);
    for (int n = 0; n < dim; ++n) d(n) = std::exp(Complex(0.0, n * theta));
    rotations.push_back(d * d.adjoint());
  }

  Matrix rho;
  if (warm_start != nullptr) {
    if (warm_start->dim() != dim) {
      throw std::invalid_argument(
          "mle_reconstruct: warm start cutoff mismatch");
    }
    rho = warm_start->matrix();
  } else {
    rho = Matrix::Identity(dim, dim) / dim;
  }

  bool warned_empty = false;
  double prev_loglike = -std::numeric_limits<double>::infinity();
  result.stop_reason = "iteration cap reached";
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    Matrix r_op = Matrix::Zero(dim, dim);
    double loglike = 0.0;
    for (int i = 0; i < histogram.n_phase_bins; ++i) {
      // sigma_i = rho rotated to phase theta_i; only its real part couples
      // to the real symmetric bin factors.
      const Matrix sigma =
          rho.cwiseProduct(rotations[static_cast<std::size_t>(i)]);
      const Eigen::MatrixXd sigma_re_t = sigma.real().transpose();
      const Eigen::VectorXd sigma_flat =
          Eigen::Map<const Eigen::VectorXd>(sigma_re_t.data(), dim * dim);
      const Eigen::VectorXd probs = bins_flat * sigma_flat;

      Eigen::VectorXd weights = Eigen::VectorXd::Zero(histogram.n_x_bins);
      for (int j = 0; j < histogram.n_x_bins; ++j) {
        const double c = histogram.counts(i, j);
        if (c <= 0.0) continue;
        const double p = probs(j);
        if (p < 1e-14) {
          if (!warned_empty) {
            result.warnings.push_back(
                "a populated bin has vanishing model probability; it was "
                "down-weighted");
            warned_empty = true;
          }
          continue;
        }
        weights(j) = c / (total * p);
        loglike += (c / total) * std::log(p);
      }
      const Eigen::VectorXd r_flat = bins_flat.transpose() * weights;
      const Eigen::MatrixXd r_real =
          Eigen::Map<const Eigen::MatrixXd>(r_flat.data(), dim, dim);
      r_op += r_real.cast<Complex>().cwiseProduct(
          rotations[static_cast<std::size_t>(i)].conjugate());
    }

    Matrix next = r_op * rho * r_op;
    const double tr = next.trace().real();
    if (!(tr > 0.0)) {
      throw ConvergenceError("mle_reconstruct: iteration collapsed the state");
    }
    next /= tr;

    result.likelihood_trace.push_back(loglike);
    const double delta = (next - rho).cwiseAbs().maxCoeff();
    rho = std::move(next);
    if (delta < options.element_tol) {
      result.converged = true;
      result.stop_reason = "state change below tolerance";
      ++iter;
      break;
    }
    if (iter > 0 && loglike - prev_loglike < options.likelihood_tol) {
      result.converged = true;
      result.stop_reason = "likelihood gain below tolerance";
      ++iter;
      break;
    }
    prev_loglike = loglike;
  }
  result.iterations = iter;

  result.rho = fock::DensityMatrix(std::move(rho));
  result.rho.normalize();
  return result;
}

BootstrapSummary bootstrap_mle(const std::vector<homodyne::SampleEvent>& events,
                               const Histogram& geometry,
                               const MleOptions& options,
                               const MleResult& point_estimate,
                               const BootstrapOptions& bootstrap) {
  if (bootstrap.replicas < 2) {
    throw std::invalid_argument("bootstrap_mle: need at least 2 replicas");
  }
  if (events.empty()) {
    throw std::invalid_argument("bootstrap_mle: no samples");
  }

  // Group sample indices by acquisition segment.
  std::map<int, std::vector<std::size_t>> segments;
  for (std::size_t k = 0; k < events.size(); ++k) {
    segments[events[k].segment_id].push_back(k);
  }
  std::vector<const std::vector<std::size_t>*> segment_list;
  segment_list.reserve(segments.size());
  for (const auto& [id, members] : segments) segment_list.push_back(&members);
  const std::size_t n_segments = segment_list.size();

  MleOptions replica_options = options;
  replica_options.max_iterations = bootstrap.max_iterations;

  const int dim = options.cutoff + 1;
  BootstrapSummary summary;
  summary.replicas = bootstrap.replicas;
  Eigen::MatrixXd populations(bootstrap.replicas, dim);
  Eigen::VectorXd parity(bootstrap.replicas);
  Eigen::VectorXd w00(bootstrap.replicas);

  std::vector<homodyne::SampleEvent> resampled;
  for (int r = 0; r < bootstrap.replicas; ++r) {
    auto gen = rng::make_stream(bootstrap.seed, static_cast<std::uint64_t>(r));
    resampled.clear();
    resampled.reserve(events.size());
    for (std::size_t s = 0; s < n_segments; ++s) {
      const auto pick = static_cast<std::size_t>(gen.uniform() *
                                                 static_cast<double>(n_segments));
      const auto& members = *segment_list[std::min(pick, n_segments - 1)];
      for (const std::size_t k : members) resampled.push_back(events[k]);
    }
    const Histogram replica = Histogram::from_events_like(resampled, geometry);
    const MleResult fit =
        mle_reconstruct(replica, replica_options, &point_estimate.rho);
    const auto stats = fock::photon_statistics(fit.rho);
    for (int n = 0; n < dim; ++n) {
      populations(r, n) = stats.populations[static_cast<std::size_t>(n)];
    }
    parity(r) = stats.parity;
    w00(r) = fock::wigner_point(fit.rho, 0.0, 0.0);
  }

  const auto mean_std = [](const Eigen::VectorXd& v, double& mean,
                           double& std) {
    mean = v.mean();
    std = std::sqrt((v.array() - mean).square().sum() / (v.size() - 1));
  };
  summary.population_mean.resize(static_cast<std::size_t>(dim));
  summary.population_std.resize(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) {
    double m = 0.0;
    double s = 0.0;
    mean_std(populations.col(n), m, s);
    summary.population_mean[static_cast<std::size_t>(n)] = m;
    summary.population_std[static_cast<std::size_t>(n)] = s;
  }
  mean_std(parity, summary.parity_mean, summary.parity_std);
  mean_std(w00, summary.w00_mean, summary.w00_std);
  return summary;
}

}  // namespace opolab::tomo
