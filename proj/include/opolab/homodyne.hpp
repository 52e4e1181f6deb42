#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "opolab/fock.hpp"
#include "opolab/rng.hpp"

namespace opolab::homodyne {

/// Local-oscillator phase program for one acquisition segment: the lock
/// window holds the phase servo (no usable phase), then the phase ramps
/// linearly across span_rad during the measure window.
struct PhaseSweep {
  double lock_s = 0.010;
  double measure_s = 0.090;
  double span_rad = M_PI;

  /// Phase at segment-local time t, or nullopt while locked / outside.
  std::optional<double> phase_at(double t_s) const;
};

struct SamplerOptions {
  double x_min = -12.0;
  double x_max = 12.0;
  double dx = 5e-3;
  double theta_bin_rad = 1e-3;
  int cache_capacity = 256;
};

/// Draws quadrature values x ~ p(x | theta) for a fixed state by
/// inverse-CDF lookup on a uniform grid. Phases are quantized to
/// theta_bin_rad and the per-bin CDF tables are kept in a bounded FIFO
/// cache, which a monotone phase sweep traverses with near-perfect reuse.
class QuadratureSampler {
 public:
  using Options = SamplerOptions;

  explicit QuadratureSampler(const fock::DensityMatrix& rho,
                             Options options = Options());

  double sample(double theta, rng::Xoshiro256pp& gen);
  int cache_size() const { return static_cast<int>(order_.size()); }
  double quantized_theta(double theta) const;

 private:
  const Eigen::VectorXd& cdf_for(double theta);

  Options options_;
  Eigen::VectorXd grid_;
  // p(x | theta) = sum over index pairs m <= n of
  //   c_mn(theta) psi_m(x) psi_n(x),
  // c_mn = rho_mm for m = n and 2 Re[rho_mn e^{i (n-m) theta}] otherwise,
  // so one real matrix-vector product per phase bin rebuilds the pdf.
  Eigen::MatrixXd pair_products_;  // (grid point, pair) -> psi_m psi_n
  Eigen::VectorXd pair_re_, pair_im_;  // Re/Im of rho_mn per pair
  Eigen::VectorXi pair_dn_;            // n - m per pair
  std::unordered_map<long long, Eigen::VectorXd> cache_;
  std::deque<long long> order_;
};

/// One detected quadrature value inside a sweep.
struct SampleEvent {
  int segment_id = 0;
  double t_s = 0.0;
  double phase_rad = 0.0;
  double x = 0.0;
};

/// Herald-triggered acquisition: herald clicks arrive at click_rate_hz
/// during each measure window, modeled as one click per equal stratum of
/// the window with uniform jitter inside the stratum (so the phase
/// histogram stays flat even for the final, partially filled segment).
std::vector<SampleEvent> synthesize_sweep_samples(QuadratureSampler& sampler,
                                                  const PhaseSweep& sweep,
                                                  int n_samples,
                                                  double click_rate_hz,
                                                  std::uint64_t seed);

std::string samples_to_csv(const std::vector<SampleEvent>& events);
std::vector<SampleEvent> samples_from_csv(const std::string& text);

/// Unit-energy double-sided exponential temporal mode, centered on the
/// record: f_i proportional to exp(-gamma |t_i - t_center|) on t_i = i dt.
/// gamma is the field decay rate (cavity half-width in rad/s). Warns when
/// the record is shorter than ~6 decay times.
std::vector<double> double_sided_exponential_mode(
    double gamma_per_s, double dt_s, int n_samples,
    std::vector<std::string>* warnings = nullptr);

/// Synthetic continuous homodyne record: the target quadrature value q0
/// rides on the unit mode f, every temporal mode orthogonal to f carries
/// plain vacuum noise. The mode filter below recovers q0 exactly.
std::vector<double> synthesize_record(double q0, const std::vector<double>& f,
                                      rng::Xoshiro256pp& gen);

/// <f, record>; with a mismatched unit filter g the output variance obeys
/// c^2 Var(q0) + (1 - c^2) / 2, c = <g, f>.
double mode_filter(const std::vector<double>& record,
                   const std::vector<double>& f);

/// Triggered homodyne records with header metadata, stored as
/// magic "HRV1" | u32 n_records | u32 n_samples | f64 dt_ns |
/// f64 t0_s[n_records] | f64 phase_rad[n_records] |
/// f32 samples[n_records * n_samples], all little-endian.
struct RecordSet {
  double dt_ns = 1.0;
  int n_samples = 0;
  std::vector<double> t0_s;
  std::vector<double> phase_rad;
  std::vector<float> samples;  // row-major [record][sample]

  int n_records() const { return static_cast<int>(t0_s.size()); }
  const float* record(int i) const { return samples.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_samples); }

  void save(const std::string& path) const;
  static RecordSet load(const std::string& path);
};

RecordSet synthesize_records(QuadratureSampler& sampler,
                             const PhaseSweep& sweep, int n_records,
                             double click_rate_hz,
                             const std::vector<double>& mode, double dt_ns,
                             std::uint64_t seed);

struct ModeExtraction {
  std::vector<double> mode;  // unit norm, sign-fixed positive at the center
  std::vector<double> eigenvalues;  // full spectrum, descending
  double leading_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;
  bool ambiguous = false;  // relative eigenvalue gap below 1e-6
};

/// Estimates the dominant temporal mode as the leading eigenvector of the
/// sample autocorrelation matrix of the records. Requires at least 1000
/// records for a usable estimate.
ModeExtraction extract_mode_from_autocorrelation(const RecordSet& records);

/// Diagnostic (heuristic) phase recovery from the running quadrature
/// variance V(theta) = S_- cos^2 theta + S_+ sin^2 theta of a monotone
/// sweep. Windows of window_size consecutive samples produce one estimate
/// each, unfolded onto a nondecreasing branch. Intended for sanity checks,
/// not as a calibration source.
std::vector<double> infer_phase_from_variance(const std::vector<double>& xs,
                                              double s_minus, double s_plus,
                                              int window_size = 2000);

}  // namespace opolab::homodyne
