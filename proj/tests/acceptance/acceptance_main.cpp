// Acceptance battery for the conditional state-preparation toolkit. Each
// criterion runs the production code end to end, measures the quantities a
// reviewer would check, and prints one [PASS]/[FAIL] line with the observed
// values, the pinned bounds, and the runtime.
//
// Criterion 2 carries its own independent oracle: the full kitten chain
// (escape loss -> weak tap with click detector -> false-click admixture ->
// detection loss) is recomputed from scratch by explicit beam-splitter
// unitaries on the doubled Fock space, and the production states must agree
// with it to 1e-9 before the statistical thresholds are applied. The
// fidelity threshold for the uncorrected reconstruction is frozen from that
// oracle: with 15% detection loss the exact detected state has a best odd
// coherent-superposition fidelity of 0.7528, so the reconstruction is held
// to >= 0.73 (oracle value minus sampling scatter), while the
// loss-corrected reconstruction is held to the 0.85 figure, which the exact
// pre-detection state (0.9058) supports.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "opolab/channels.hpp"
#include "opolab/config.hpp"
#include "opolab/fock.hpp"
#include "opolab/herald.hpp"
#include "opolab/homodyne.hpp"
#include "opolab/opo.hpp"
#include "opolab/pipeline.hpp"
#include "opolab/rng.hpp"
#include "opolab/tomography.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

using opolab::fock::Complex;
using opolab::fock::DensityMatrix;
using opolab::fock::Matrix;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CriterionResult {
  bool ok = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

std::string config_path(const std::string& name) {
  return std::string(OPOLAB_CONFIG_DIR) + "/" + name;
}

std::vector<opolab::homodyne::SampleEvent> sweep_dataset(
    const DensityMatrix& rho, const opolab::config::PipelineConfig& cfg,
    int n_samples, std::uint64_t seed) {
  opolab::homodyne::QuadratureSampler sampler(rho);
  const opolab::homodyne::PhaseSweep sweep{
      cfg.homodyne.lock_s, cfg.homodyne.measure_s, cfg.homodyne.span_rad};
  return opolab::homodyne::synthesize_sweep_samples(
      sampler, sweep, n_samples, cfg.herald.click_rate_hz, seed);
}

opolab::tomo::MleResult reconstruct(
    const std::vector<opolab::homodyne::SampleEvent>& events,
    const opolab::config::PipelineConfig& cfg, double eta,
    opolab::tomo::Histogram* histogram_out = nullptr) {
  const opolab::tomo::Histogram histogram =
      opolab::tomo::Histogram::from_events(events, cfg.tomography.phase_bins,
                                           cfg.tomography.x_bin_width, 0.0,
                                           cfg.homodyne.span_rad);
  if (histogram_out != nullptr) *histogram_out = histogram;
  opolab::tomo::MleOptions options;
  options.cutoff = cfg.tomography.cutoff;
  options.eta = eta;
  options.max_iterations = cfg.tomography.max_iterations;
  return opolab::tomo::mle_reconstruct(histogram, options);
}

bool likelihood_monotone(const opolab::tomo::MleResult& fit) {
  for (std::size_t k = 1; k < fit.likelihood_trace.size(); ++k) {
    if (fit.likelihood_trace[k] < fit.likelihood_trace[k - 1] - 1e-9) {
      return false;
    }
  }
  return true;
}

DensityMatrix random_state(int dim, opolab::rng::Xoshiro256pp& gen) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(gen.normal(), gen.normal());
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 2 oracle: beam-splitter dilation on the doubled Fock space
// ---------------------------------------------------------------------------

// Unitary of a beam splitter that keeps a fraction `transmission` of the
// signal mode, acting on C^(d*d) with index m*d + n (signal m, ancilla n).
Matrix beam_splitter_unitary(int d, double transmission) {
  const double theta = std::acos(std::sqrt(transmission));
  Eigen::MatrixXd raising = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int m = 0; m + 1 < d; ++m) {
    for (int n = 1; n < d; ++n) {
      // a^dag b |m, n> = sqrt((m+1) n) |m+1, n-1>
      raising((m + 1) * d + (n - 1), m * d + n) =
          std::sqrt(static_cast<double>(m + 1) * static_cast<double>(n));
    }
  }
  const Eigen::MatrixXd generator = theta * (raising - raising.transpose());
  // exp of the real antisymmetric generator via the Hermitian matrix i*G.
  const Matrix h = Complex(0.0, 1.0) * generator.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  opolab::fock::Vector phases(d * d);
  for (int k = 0; k < d * d; ++k) {
    phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k)));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

// rho (x) |0><0| evolved through the beam splitter, then the ancilla mode
// is traced out against per-photon-number weights w_n.
Matrix couple_and_trace(const Matrix& rho, const Matrix& unitary,
                        const std::vector<double>& weights) {
  const int d = static_cast<int>(rho.rows());
  Matrix joint = Matrix::Zero(d * d, d * d);
  for (int m = 0; m < d; ++m) {
    for (int mp = 0; mp < d; ++mp) {
      joint(m * d + 0, mp * d + 0) = rho(m, mp);
    }
  }
  const Matrix evolved = unitary * joint * unitary.adjoint();
  Matrix out = Matrix::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    for (int mp = 0; mp < d; ++mp) {
      Complex acc(0.0, 0.0);
      for (int n = 0; n < d; ++n) {
        acc += weights[static_cast<std::size_t>(n)] *
               evolved(m * d + n, mp * d + n);
      }
      out(m, mp) = acc;
    }
  }
  return out;
}

Matrix dilated_loss(const Matrix& rho, double eta) {
  const int d = static_cast<int>(rho.rows());
  const Matrix u = beam_splitter_unitary(d, eta);
  return couple_and_trace(rho, u, std::vector<double>(d, 1.0));
}

// Full weak-tap subtraction: returns the click-conditioned state mixed with
// the tap-only reference at false-click weight w.
Matrix dilated_subtraction(const Matrix& rho, double tap_reflectivity,
                           double eta_h, double w) {
  const int d = static_cast<int>(rho.rows());
  const Matrix u = beam_splitter_unitary(d, 1.0 - tap_reflectivity);

  std::vector<double> click(d);
  for (int n = 0; n < d; ++n) {
    click[static_cast<std::size_t>(n)] = 1.0 - std::pow(1.0 - eta_h, n);
  }
  Matrix conditional = couple_and_trace(rho, u, click);
  const double p_click = conditional.trace().real();
  conditional /= p_click;

  const Matrix reference =
      couple_and_trace(rho, u, std::vector<double>(d, 1.0));
  return (1.0 - w) * conditional + w * reference;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

CriterionResult criterion_1_single_photon() {
  const auto start = Clock::now();
  const auto cfg =
      opolab::config::PipelineConfig::load(config_path("single_photon.ini"));
  const auto prepared = opolab::pipeline::prepare(cfg, "single_photon");
  const auto events =
      sweep_dataset(prepared.detected, cfg, cfg.run.n_samples, cfg.run.seed);

  const auto raw = reconstruct(events, cfg, 1.0);
  const auto corrected = reconstruct(events, cfg, cfg.detection.eta());
  const double p1_raw = raw.rho.matrix()(1, 1).real();
  const double p1_fix = corrected.rho.matrix()(1, 1).real();
  const double p2_raw = raw.rho.matrix()(2, 2).real();
  const double p2_fix = corrected.rho.matrix()(2, 2).real();
  const double elapsed = seconds_since(start);

  CriterionResult r;
  r.ok = p1_raw >= 0.75 && p1_raw <= 0.81 && p1_fix >= 0.88 &&
         p1_fix <= 0.94 && p2_raw <= 0.05 && p2_fix <= 0.05 &&
         raw.converged && corrected.converged && likelihood_monotone(raw) &&
         likelihood_monotone(corrected) && elapsed <= 300.0;
  r.detail = format(
      "rho11 raw %.4f in [0.75,0.81], corrected %.4f in [0.88,0.94], "
      "rho22 %.4f <= 0.05, 50k samples in %.1f s (cap 300)",
      p1_raw, p1_fix, p2_fix, elapsed);
  return r;
}

CriterionResult criterion_2_kitten() {
  const auto start = Clock::now();
  const auto cfg =
      opolab::config::PipelineConfig::load(config_path("kitten.ini"));
  const auto prepared = opolab::pipeline::prepare(cfg, "kitten");

  // Independent chain: every stage as an explicit two-mode dilation.
  const double sigma =
      opolab::opo::pump_parameter(cfg.opo.pump(), cfg.opo.threshold_mw);
  const double r_sq = opolab::opo::squeezing_parameter(sigma);
  const int dim = prepared.ideal.dim();
  const opolab::fock::Vector ket = opolab::opo::squeezed_vacuum_ket(r_sq, dim);
  const Matrix pure = ket * ket.adjoint();
  const Matrix at_tap = dilated_loss(pure, cfg.opo.escape_efficiency());
  const Matrix oracle_ideal =
      dilated_subtraction(at_tap, cfg.herald.tap_reflectivity,
                          cfg.herald.herald_efficiency,
                          cfg.herald.false_click());
  const Matrix oracle_detected =
      dilated_loss(oracle_ideal, cfg.detection.eta());

  const double ideal_gap =
      max_abs_diff(oracle_ideal, prepared.ideal.matrix());
  const double detected_gap =
      max_abs_diff(oracle_detected, prepared.detected.matrix());

  // Exact figures of merit of the oracle states; the frozen values guard
  // against silent drift of the preparation chain.
  const DensityMatrix oracle_det_state{oracle_detected};
  const DensityMatrix oracle_ideal_state{oracle_ideal};
  const double w00_exact =
      opolab::fock::wigner_point(oracle_det_state, 0.0, 0.0);
  const double fit_detected_exact =
      opolab::herald::best_css_fit(oracle_det_state).fidelity;
  const double fit_ideal_exact =
      opolab::herald::best_css_fit(oracle_ideal_state).fidelity;

  // Closed loop on the production detected state.
  const auto events =
      sweep_dataset(prepared.detected, cfg, cfg.run.n_samples, cfg.run.seed);
  const auto raw = reconstruct(events, cfg, 1.0);
  const auto corrected = reconstruct(events, cfg, cfg.detection.eta());

  const double w00 = opolab::fock::wigner_point(raw.rho, 0.0, 0.0);
  const auto stats = opolab::fock::photon_statistics(raw.rho);
  const auto& p = stats.populations;
  const double odd_margin = (p[1] + p[3]) - (p[0] + p[2]);
  const opolab::herald::CssFit fit_raw = opolab::herald::best_css_fit(raw.rho);
  const opolab::herald::CssFit fit_fix =
      opolab::herald::best_css_fit(corrected.rho);
  const double elapsed = seconds_since(start);

  CriterionResult r;
  r.ok = ideal_gap <= 1e-9 && detected_gap <= 1e-9 &&
         std::abs(w00_exact - (-0.16262)) <= 0.002 &&
         std::abs(fit_detected_exact - 0.75279) <= 0.002 &&
         std::abs(fit_ideal_exact - 0.90580) <= 0.002 && w00 <= -0.05 &&
         odd_margin > 0.0 && fit_raw.fidelity >= 0.73 &&
         fit_fix.fidelity >= 0.85 && raw.converged && corrected.converged;
  r.detail = format(
      "dilation oracle gap %.1e/%.1e <= 1e-9, W(0,0) %.4f <= -0.05, "
      "p1+p3-p0-p2 %.3f > 0, fit raw %.4f >= 0.73 (exact %.4f), "
      "fit corrected %.4f >= 0.85 (exact %.4f), %.1f s",
      ideal_gap, detected_gap, w00, odd_margin, fit_raw.fidelity,
      fit_detected_exact, fit_fix.fidelity, fit_ideal_exact, elapsed);
  return r;
}

CriterionResult criterion_3_spectra() {
  const auto start = Clock::now();
  const auto cfg =
      opolab::config::PipelineConfig::load(config_path("spectra.ini"));
  const double gamma_mhz = cfg.opo.halfwidth_hz() / 1e6;
  const double eta_total =
      cfg.opo.escape_efficiency() * cfg.detection.eta();

  const std::string csv = opolab::pipeline::spectra_csv(cfg);
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);  // header
  double s_minus_5 = 0.0, s_plus_5 = 0.0, s_minus_40 = 0.0, s_plus_40 = 0.0;
  bool found = false;
  while (std::getline(rows, line)) {
    std::stringstream fields(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(fields, field, ',')) values.push_back(std::stod(field));
    if (values.size() == 5 && std::abs(values[0] - 5e6) < 0.5) {
      s_minus_5 = values[1];
      s_plus_5 = values[2];
      s_minus_40 = values[3];
      s_plus_40 = values[4];
      found = true;
    }
  }
  const double symmetry_gap = std::abs(std::abs(s_minus_5) - std::abs(s_plus_5));
  const double elapsed = seconds_since(start);

  CriterionResult r;
  r.ok = found && gamma_mhz >= 28.0 && gamma_mhz <= 36.0 &&
         eta_total >= 0.88 && eta_total <= 0.95 && s_minus_40 >= -11.0 &&
         s_minus_40 <= -10.0 && s_plus_40 >= 18.0 && s_plus_40 <= 20.0 &&
         symmetry_gap <= 0.5;
  r.detail = format(
      "halfwidth %.0f MHz in [28,36], eta %.4f in [0.88,0.95]; at 5 MHz: "
      "%.2f dB in -10.5+-0.5, %+.2f dB in 19+-1, weak-pump asymmetry "
      "%.3f dB <= 0.5, %.1f s",
      gamma_mhz, eta_total, s_minus_40, s_plus_40, symmetry_gap, elapsed);
  return r;
}

CriterionResult criterion_4_estimator_quality() {
  const auto start = Clock::now();
  const auto cfg =
      opolab::config::PipelineConfig::load(config_path("single_photon.ini"));
  const auto kitten_cfg =
      opolab::config::PipelineConfig::load(config_path("kitten.ini"));

  struct Case {
    const char* name;
    DensityMatrix state;
    std::uint64_t seed;
  };
  const std::vector<Case> cases = {
      {"vacuum", DensityMatrix::vacuum(4), 41},
      {"lossy_one",
       opolab::channels::loss_apply(
           opolab::fock::DensityMatrix::fock_state(1, 6), 0.85),
       42},
      {"kitten", opolab::pipeline::prepare(kitten_cfg, "kitten").detected,
       43},
  };

  double worst = 0.0;
  double worst_boot = 0.0;
  double worst_std = 0.0;
  bool monotone = true;
  std::string worst_name = "-";
  for (const auto& test_case : cases) {
    const auto events = sweep_dataset(test_case.state, cfg, 50000,
                                      test_case.seed);
    opolab::tomo::Histogram histogram;
    const auto fit = reconstruct(events, cfg, 1.0, &histogram);
    monotone = monotone && likelihood_monotone(fit) && fit.converged;

    opolab::tomo::MleOptions options;
    options.cutoff = cfg.tomography.cutoff;
    opolab::tomo::BootstrapOptions boot;
    boot.replicas = 10;
    boot.seed = 7;
    const auto summary = opolab::tomo::bootstrap_mle(events, histogram,
                                                     options, fit, boot);

    for (int n = 0; n <= cfg.tomography.cutoff; ++n) {
      const double truth = n < test_case.state.dim()
                               ? test_case.state.matrix()(n, n).real()
                               : 0.0;
      const double err = std::abs(fit.rho.matrix()(n, n).real() - truth);
      if (err > worst) {
        worst = err;
        worst_name = test_case.name;
      }
      worst_boot = std::max(
          worst_boot,
          std::abs(summary.population_mean[static_cast<std::size_t>(n)] -
                   truth));
      worst_std = std::max(
          worst_std, summary.population_std[static_cast<std::size_t>(n)]);
    }
  }
  const double elapsed = seconds_since(start);

  CriterionResult r;
  r.ok = worst <= 0.015 && worst_boot <= 0.015 && worst_std <= 0.01 &&
         monotone;
  r.detail = format(
      "3 states x 50k: worst diagonal error %.4f (%s) <= 0.015, bootstrap "
      "mean error %.4f <= 0.015, bootstrap std %.4f <= 0.01, likelihood "
      "monotone %s, %.1f s",
      worst, worst_name.c_str(), worst_boot, worst_std,
      monotone ? "yes" : "NO", elapsed);
  return r;
}

CriterionResult criterion_5_channel_properties() {
  const auto start = Clock::now();
  auto gen = opolab::rng::make_stream(2026, 5);
  int checks = 0;
  int violations = 0;
  const auto tally = [&](bool ok) {
    ++checks;
    if (!ok) ++violations;
  };

  // Loss semigroup.
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_state(8, gen);
    for (const double eta1 : {0.97, 0.85, 0.70}) {
      for (const double eta2 : {0.92, 0.75}) {
        const auto two_step = opolab::channels::loss_apply(
            opolab::channels::loss_apply(rho, eta1), eta2);
        const auto one_step =
            opolab::channels::loss_apply(rho, eta1 * eta2);
        tally(max_abs_diff(two_step.matrix(), one_step.matrix()) <= 1e-10);
      }
    }
  }

  // Inversion round trip.
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = random_state(6, gen);
    for (const double eta : {0.85, 0.92, 0.99}) {
      const auto inverted = opolab::channels::loss_invert(
          opolab::channels::loss_apply(rho, eta), eta);
      tally(max_abs_diff(inverted.state.matrix(), rho.matrix()) <= 1e-9);
    }
  }

  // Heisenberg-picture duality.
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = random_state(8, gen);
    Matrix x(8, 8);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) x(i, j) = Complex(gen.normal(), gen.normal());
    }
    x = (x + Matrix(x.adjoint())).eval();
    for (const double eta : {0.85, 0.70}) {
      const double heisenberg =
          (opolab::channels::loss_adjoint(x, eta) * rho.matrix())
              .trace()
              .real();
      const double schroedinger =
          (x * opolab::channels::loss_apply(rho, eta).matrix())
              .trace()
              .real();
      tally(std::abs(heisenberg - schroedinger) <= 1e-10);
    }
  }

  // Parity identity at the phase-space origin.
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_state(10, gen);
    const auto stats = opolab::fock::photon_statistics(rho);
    tally(std::abs(opolab::fock::wigner_point(rho, 0.0, 0.0) -
                   stats.parity / kPi) <= 1e-8);
  }

  // Projector completeness per phase.
  for (const double eta : {1.0, 0.85}) {
    for (const double theta : {0.0, 0.7, 2.1}) {
      Matrix sum = Matrix::Zero(11, 11);
      for (int j = 0; j < 480; ++j) {
        const double x = -12.0 + (j + 0.5) * 0.05;
        sum += opolab::tomo::povm_element(theta, x, eta, 10, 0.05);
      }
      sum -= Matrix::Identity(11, 11);
      tally(operator_norm(sum) <= 1e-3);
    }
  }

  const double elapsed = seconds_since(start);
  CriterionResult r;
  r.ok = violations == 0 && elapsed <= 120.0;
  r.detail = format(
      "semigroup, inversion round-trip, adjoint duality, parity identity, "
      "projector completeness: %d violations in %d checks, %.1f s (cap 120)",
      violations, checks, elapsed);
  return r;
}

CriterionResult criterion_6_mode_extraction() {
  const auto start = Clock::now();
  const int n = 500;
  const std::vector<double> f = opolab::homodyne::double_sided_exponential_mode(
      2.0 * kPi * 35e6, 0.2e-9, n);

  // (a) Recover the injected mode from 10^4 records of a high-variance
  // (anti-squeezed) quadrature ensemble.
  const opolab::fock::Vector ket = opolab::opo::squeezed_vacuum_ket(1.2, 60);
  opolab::homodyne::QuadratureSampler sampler{DensityMatrix::from_ket(ket)};
  opolab::homodyne::RecordSet records;
  records.dt_ns = 0.2;
  records.n_samples = n;
  auto q_gen = opolab::rng::make_stream(61, 1);
  auto w_gen = opolab::rng::make_stream(61, 2);
  const int m = 10000;
  records.t0_s.assign(m, 0.05);
  records.phase_rad.assign(m, kPi / 2);
  records.samples.reserve(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    const double q0 = sampler.sample(kPi / 2, q_gen);
    const auto rec = opolab::homodyne::synthesize_record(q0, f, w_gen);
    for (double v : rec) records.samples.push_back(static_cast<float>(v));
  }
  const auto extraction =
      opolab::homodyne::extract_mode_from_autocorrelation(records);
  double overlap = 0.0;
  for (int i = 0; i < n; ++i) overlap += extraction.mode[i] * f[i];
  overlap = std::abs(overlap);

  // (b) Mismatched-filter variance law at five overlap values.
  std::vector<double> partner(n, 0.0);
  for (int i = 0; i + 100 < n; ++i) partner[i] = f[i + 100];
  double cross = 0.0;
  for (int i = 0; i < n; ++i) cross += partner[i] * f[i];
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    partner[i] -= cross * f[i];
    norm += partner[i] * partner[i];
  }
  for (auto& v : partner) v /= std::sqrt(norm);

  opolab::homodyne::QuadratureSampler one{
      opolab::fock::DensityMatrix::fock_state(1, 6)};
  auto law_q = opolab::rng::make_stream(63, 1);
  auto law_w = opolab::rng::make_stream(63, 2);
  const int m_law = 20000;
  std::vector<std::vector<double>> law_records;
  law_records.reserve(static_cast<std::size_t>(m_law));
  for (int i = 0; i < m_law; ++i) {
    law_records.push_back(
        opolab::homodyne::synthesize_record(one.sample(0.0, law_q), f, law_w));
  }
  double worst_law = 0.0;
  for (const double c : {1.0, 0.9, 0.7, 0.5, 0.0}) {
    std::vector<double> g(n);
    const double s = std::sqrt(1.0 - c * c);
    for (int i = 0; i < n; ++i) g[i] = c * f[i] + s * partner[i];
    double mean = 0.0;
    std::vector<double> filtered(m_law);
    for (int i = 0; i < m_law; ++i) {
      filtered[i] = opolab::homodyne::mode_filter(law_records[i], g);
      mean += filtered[i];
    }
    mean /= m_law;
    double var = 0.0;
    for (const double v : filtered) var += (v - mean) * (v - mean);
    var /= m_law;
    const double expected = c * c * 1.5 + (1.0 - c * c) * 0.5;
    worst_law = std::max(worst_law, std::abs(var - expected) / expected);
  }
  const double elapsed = seconds_since(start);

  CriterionResult r;
  r.ok = !extraction.ambiguous && overlap >= 0.99 && worst_law <= 0.03;
  r.detail = format(
      "mode overlap %.4f >= 0.99 on 10^4 records (unambiguous: %s), worst "
      "mismatch-law deviation %.1f%% <= 3%% over 5 overlaps, %.1f s",
      overlap, extraction.ambiguous ? "NO" : "yes", 100.0 * worst_law,
      elapsed);
  return r;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    CriterionResult (*run)();
  };
  const Entry entries[] = {
      {"single-photon closed loop", criterion_1_single_photon},
      {"kitten closed loop with dilation oracle", criterion_2_kitten},
      {"squeezing spectra", criterion_3_spectra},
      {"tomography estimator quality", criterion_4_estimator_quality},
      {"channel property battery", criterion_5_channel_properties},
      {"temporal-mode extraction", criterion_6_mode_extraction},
  };

  int passed = 0;
  int index = 0;
  for (const auto& entry : entries) {
    ++index;
    CriterionResult result;
    try {
      result = entry.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s — %s\n", result.ok ? "PASS" : "FAIL",
                index, entry.name, result.detail.c_str());
    std::fflush(stdout);
    if (result.ok) ++passed;
  }
  std::printf("acceptance: %d/6 criteria passed\n", passed);
  return passed == 6 ? 0 : 1;
}
