#include "opolab/homodyne.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include <Eigen/Eigenvalues>

#include "opolab/errors.hpp"
#include "opolab/pairwise.hpp"

namespace opolab::homodyne {

std::optional<double> PhaseSweep::phase_at(double t_s) const {
  if (!(lock_s >= 0.0) || !(measure_s > 0.0) || !(span_rad > 0.0)) {
    throw std::invalid_argument("PhaseSweep: invalid window configuration");
  }
  if (!std::isfinite(t_s) || t_s < lock_s || t_s >= lock_s + measure_s) {
    return std::nullopt;
  }
  return span_rad * (t_s - lock_s) / measure_s;
}

QuadratureSampler::QuadratureSampler(const fock::DensityMatrix& rho,
                                     Options options)
    : options_(options) {
  rho.require_normalized(1e-6);
  if (!(options_.dx > 0.0) || !(options_.x_max > options_.x_min) ||
      !(options_.theta_bin_rad > 0.0) || options_.cache_capacity < 1) {
    throw std::invalid_argument("QuadratureSampler: invalid options");
  }
  const int n = static_cast<int>(
                    std::floor((options_.x_max - options_.x_min) / options_.dx + 0.5)) +
                1;
  grid_.resize(n);
  for (int i = 0; i < n; ++i) grid_(i) = options_.x_min + i * options_.dx;
  const int dim = rho.dim();
  Eigen::MatrixXd psi(n, dim);
  for (int i = 0; i < n; ++i) {
    psi.row(i) = fock::wavefunction_column(dim - 1, grid_(i)).transpose();
  }
  const int n_pairs = dim * (dim + 1) / 2;
  pair_products_.resize(n, n_pairs);
  pair_re_.resize(n_pairs);
  pair_im_.resize(n_pairs);
  pair_dn_.resize(n_pairs);
  int k = 0;
  for (int m = 0; m < dim; ++m) {
    for (int nn = m; nn < dim; ++nn, ++k) {
      pair_products_.col(k) = psi.col(m).cwiseProduct(psi.col(nn));
      pair_re_(k) = rho.matrix()(m, nn).real();
      pair_im_(k) = rho.matrix()(m, nn).imag();
      pair_dn_(k) = nn - m;
    }
  }
}

double QuadratureSampler::quantized_theta(double theta) const {
  return static_cast<double>(std::llround(theta / options_.theta_bin_rad)) *
         options_.theta_bin_rad;
}

const Eigen::VectorXd& QuadratureSampler::cdf_for(double theta) {
  const long long key = std::llround(theta / options_.theta_bin_rad);
  auto found = cache_.find(key);
  if (found != cache_.end()) return found->second;

  const double theta_q = key * options_.theta_bin_rad;
  const int n_pairs = static_cast<int>(pair_dn_.size());
  Eigen::VectorXd coeff(n_pairs);
  for (int k = 0; k < n_pairs; ++k) {
    const int dn = pair_dn_(k);
    if (dn == 0) {
      coeff(k) = pair_re_(k);
    } else {
      coeff(k) = 2.0 * (pair_re_(k) * std::cos(dn * theta_q) -
                        pair_im_(k) * std::sin(dn * theta_q));
    }
  }
  Eigen::VectorXd pdf = pair_products_ * coeff;
  pdf = pdf.cwiseMax(0.0);  // clip rounding noise

  const int n = static_cast<int>(grid_.size());
  Eigen::VectorXd cdf(n);
  cdf(0) = 0.0;
  for (int i = 1; i < n; ++i) {
    cdf(i) = cdf(i - 1) + 0.5 * (pdf(i) + pdf(i - 1)) * options_.dx;
  }
  const double total = cdf(n - 1);
  if (!(total > 0.0)) {
    throw std::invalid_argument(
        "QuadratureSampler: pdf vanished on the sampling grid");
  }
  cdf /= total;

  if (static_cast<int>(order_.size()) >= options_.cache_capacity) {
    cache_.erase(order_.front());
    order_.pop_front();
  }
  order_.push_back(key);
  return cache_.emplace(key, std::move(cdf)).first->second;
}

double QuadratureSampler::sample(double theta, rng::Xoshiro256pp& gen) {
  const Eigen::VectorXd& cdf = cdf_for(theta);
  const double u = gen.uniform();
  const int n = static_cast<int>(cdf.size());
  const double* begin = cdf.data();
  const double* it = std::upper_bound(begin, begin + n, u);
  int i = static_cast<int>(it - begin) - 1;
  i = std::clamp(i, 0, n - 2);
  const double df = cdf(i + 1) - cdf(i);
  if (df <= 0.0) return grid_(i);
  return grid_(i) + options_.dx * (u - cdf(i)) / df;
}

namespace {

struct Schedule {
  int windows = 0;
  int per_window = 0;
};

Schedule trigger_schedule(int n_total, const PhaseSweep& sweep,
                          double click_rate_hz) {
  if (n_total < 1) throw std::invalid_argument("need at least one sample");
  if (!(click_rate_hz > 0.0)) {
    throw std::invalid_argument("click rate must be positive");
  }
  Schedule s;
  s.per_window = static_cast<int>(
      std::max<long long>(1, std::llround(click_rate_hz * sweep.measure_s)));
  s.windows = (n_total + s.per_window - 1) / s.per_window;
  return s;
}

}  // namespace

std::vector<SampleEvent> synthesize_sweep_samples(QuadratureSampler& sampler,
                                                  const PhaseSweep& sweep,
                                                  int n_samples,
                                                  double click_rate_hz,
                                                  std::uint64_t seed) {
  const Schedule plan = trigger_schedule(n_samples, sweep, click_rate_hz);
  std::vector<SampleEvent> events;
  events.reserve(static_cast<std::size_t>(n_samples));
  for (int w = 0; w < plan.windows; ++w) {
    const int k = std::min(plan.per_window, n_samples - w * plan.per_window);
    auto gen = rng::make_stream(seed, static_cast<std::uint64_t>(w));
    // One trigger per stratum of the measure window; a partially filled
    // final segment still spreads its triggers across the whole window so
    // the phase histogram stays flat.
    for (int j = 0; j < k; ++j) {
      const double t =
          sweep.lock_s + sweep.measure_s * (j + gen.uniform()) / k;
      const auto phase = sweep.phase_at(t);
      SampleEvent ev;
      ev.segment_id = w;
      ev.t_s = t;
      ev.phase_rad = *phase;
      ev.x = sampler.sample(ev.phase_rad, gen);
      events.push_back(ev);
    }
  }
  return events;
}

std::string samples_to_csv(const std::vector<SampleEvent>& events) {
  std::string out = "segment_id,phase_rad,x\n";
  char buf[96];
  for (const auto& ev : events) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g\n", ev.segment_id,
                  ev.phase_rad, ev.x);
    out += buf;
  }
  return out;
}

namespace {

ConfigError csv_error(int line, const std::string& what) {
  return ConfigError("quadrature CSV line " + std::to_string(line) + ": " +
                     what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_csv_double(std::string_view field, int line) {
  field = trim(field);
  double value = 0.0;
  const auto result =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc() || result.ptr != field.data() + field.size()) {
    throw csv_error(line, "expected a number, got '" + std::string(field) +
                              "'");
  }
  return value;
}

}  // namespace

std::vector<SampleEvent> samples_from_csv(const std::string& text) {
  std::vector<SampleEvent> events;
  std::size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (end == std::string::npos ? text.size() : end) - pos);
    pos = (end == std::string::npos) ? text.size() + 1 : end + 1;
    ++line_no;
    const std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (!saw_header) {
      if (trimmed != "segment_id,phase_rad,x") {
        throw csv_error(line_no, "expected header 'segment_id,phase_rad,x'");
      }
      saw_header = true;
      continue;
    }
    const std::size_t c1 = trimmed.find(',');
    const std::size_t c2 =
        (c1 == std::string_view::npos) ? std::string_view::npos
                                       : trimmed.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        trimmed.find(',', c2 + 1) != std::string_view::npos) {
      throw csv_error(line_no, "expected 3 comma-separated fields");
    }
    SampleEvent ev;
    const double seg = parse_csv_double(trimmed.substr(0, c1), line_no);
    if (seg < 0 || seg != std::floor(seg)) {
      throw csv_error(line_no, "segment_id must be a non-negative integer");
    }
    ev.segment_id = static_cast<int>(seg);
    ev.phase_rad = parse_csv_double(trimmed.substr(c1 + 1, c2 - c1 - 1),
                                    line_no);
    ev.x = parse_csv_double(trimmed.substr(c2 + 1), line_no);
    events.push_back(ev);
  }
  if (!saw_header) {
    throw ConfigError("quadrature CSV is empty (missing header)");
  }
  return events;
}

std::vector<double> double_sided_exponential_mode(
    double gamma_per_s, double dt_s, int n_samples,
    std::vector<std::string>* warnings) {
  if (n_samples < 1 || !(dt_s > 0.0) || !(gamma_per_s > 0.0)) {
    throw std::invalid_argument("double_sided_exponential_mode: bad arguments");
  }
  const double t_center_s = 0.5 * (n_samples - 1) * dt_s;
  std::vector<double> f(static_cast<std::size_t>(n_samples));
  double norm_sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double v = std::exp(-gamma_per_s * std::abs(i * dt_s - t_center_s));
    f[static_cast<std::size_t>(i)] = v;
    norm_sq += v * v;
  }
  const double norm = std::sqrt(norm_sq);
  for (auto& v : f) v /= norm;
  if (warnings != nullptr && n_samples * dt_s < 6.0 / gamma_per_s) {
    warnings->push_back(
        "record window is shorter than six mode decay times; the temporal "
        "mode is truncated");
  }
  return f;
}

std::vector<double> synthesize_record(double q0, const std::vector<double>& f,
                                      rng::Xoshiro256pp& gen) {
  if (f.empty()) throw std::invalid_argument("synthesize_record: empty mode");
  double norm_sq = 0.0;
  for (double v : f) norm_sq += v * v;
  if (std::abs(norm_sq - 1.0) > 1e-6) {
    throw std::invalid_argument("synthesize_record: mode must have unit energy");
  }
  const double sigma = std::sqrt(fock::kVacuumVariance);
  std::vector<double> x(f.size());
  double overlap = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    x[i] = sigma * gen.normal();
    overlap += f[i] * x[i];
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    x[i] += (q0 - overlap) * f[i];
  }
  return x;
}

double mode_filter(const std::vector<double>& record,
                   const std::vector<double>& f) {
  if (record.size() != f.size() || record.empty()) {
    throw std::invalid_argument("mode_filter: size mismatch");
  }
  std::vector<double> products(record.size());
  for (std::size_t i = 0; i < record.size(); ++i) {
    products[i] = record[i] * f[i];
  }
  return pairwise_sum(products);
}

namespace {

constexpr char kRecordMagic[4] = {'H', 'R', 'V', '1'};

template <typename T>
void write_raw(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_raw(std::ifstream& in, T* data, std::size_t count,
              const std::string& path) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) {
    throw ConfigError("record store '" + path + "' is truncated");
  }
}

}  // namespace

void RecordSet::save(const std::string& path) const {
  if (t0_s.size() != phase_rad.size() ||
      samples.size() != t0_s.size() * static_cast<std::size_t>(n_samples)) {
    throw std::invalid_argument("RecordSet::save: inconsistent field sizes");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  const std::uint32_t n_rec = static_cast<std::uint32_t>(t0_s.size());
  const std::uint32_t n_smp = static_cast<std::uint32_t>(n_samples);
  out.write(kRecordMagic, 4);
  write_raw(out, &n_rec, 1);
  write_raw(out, &n_smp, 1);
  write_raw(out, &dt_ns, 1);
  write_raw(out, t0_s.data(), t0_s.size());
  write_raw(out, phase_rad.data(), phase_rad.size());
  write_raw(out, samples.data(), samples.size());
  if (!out) throw ConfigError("failed while writing '" + path + "'");
}

RecordSet RecordSet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open record store '" + path + "'");
  char magic[4];
  read_raw(in, magic, 4, path);
  if (std::memcmp(magic, kRecordMagic, 4) != 0) {
    throw ConfigError("'" + path + "' is not a homodyne record store");
  }
  std::uint32_t n_rec = 0;
  std::uint32_t n_smp = 0;
  RecordSet set;
  read_raw(in, &n_rec, 1, path);
  read_raw(in, &n_smp, 1, path);
  read_raw(in, &set.dt_ns, 1, path);
  if (n_smp == 0) throw ConfigError("'" + path + "' declares empty records");
  set.n_samples = static_cast<int>(n_smp);
  set.t0_s.resize(n_rec);
  set.phase_rad.resize(n_rec);
  set.samples.resize(static_cast<std::size_t>(n_rec) * n_smp);
  read_raw(in, set.t0_s.data(), set.t0_s.size(), path);
  read_raw(in, set.phase_rad.data(), set.phase_rad.size(), path);
  read_raw(in, set.samples.data(), set.samples.size(), path);
  return set;
}

RecordSet synthesize_records(QuadratureSampler& sampler,
                             const PhaseSweep& sweep, int n_records,
                             double click_rate_hz,
                             const std::vector<double>& mode, double dt_ns,
                             std::uint64_t seed) {
  const Schedule plan = trigger_schedule(n_records, sweep, click_rate_hz);
  RecordSet set;
  set.dt_ns = dt_ns;
  set.n_samples = static_cast<int>(mode.size());
  set.t0_s.reserve(static_cast<std::size_t>(n_records));
  set.phase_rad.reserve(static_cast<std::size_t>(n_records));
  set.samples.reserve(static_cast<std::size_t>(n_records) * mode.size());
  const double segment_length = sweep.lock_s + sweep.measure_s;
  for (int w = 0; w < plan.windows; ++w) {
    const int k = std::min(plan.per_window, n_records - w * plan.per_window);
    auto gen = rng::make_stream(seed, static_cast<std::uint64_t>(w));
    for (int j = 0; j < k; ++j) {
      const double t =
          sweep.lock_s + sweep.measure_s * (j + gen.uniform()) / k;
      const auto phase = sweep.phase_at(t);
      const double q0 = sampler.sample(*phase, gen);
      const std::vector<double> rec = synthesize_record(q0, mode, gen);
      set.t0_s.push_back(w * segment_length + t);
      set.phase_rad.push_back(*phase);
      for (double v : rec) set.samples.push_back(static_cast<float>(v));
    }
  }
  return set;
}

ModeExtraction extract_mode_from_autocorrelation(const RecordSet& records) {
  const int m = records.n_records();
  const int n = records.n_samples;
  if (m < 1000) {
    throw std::invalid_argument(
        "extract_mode_from_autocorrelation: need at least 1000 records");
  }
  if (n < 2) {
    throw std::invalid_argument(
        "extract_mode_from_autocorrelation: records too short");
  }
  Eigen::MatrixXd x(m, n);
  for (int i = 0; i < m; ++i) {
    const float* row = records.record(i);
    for (int j = 0; j < n; ++j) x(i, j) = static_cast<double>(row[j]);
  }
  Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(n, n);
  corr.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      corr.selfadjointView<Eigen::Lower>());
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  Eigen::VectorXd mode = solver.eigenvectors().col(n - 1);

  Eigen::Index anchor = n / 2;
  if (std::abs(mode(anchor)) < 1e-12) {
    mode.cwiseAbs().maxCoeff(&anchor);
  }
  if (mode(anchor) < 0.0) mode = -mode;

  ModeExtraction out;
  out.leading_eigenvalue = evals(n - 1);
  out.second_eigenvalue = evals(n - 2);
  const double gap = evals(n - 1) - evals(n - 2);
  const bool degenerate =
      gap < 1e-6 * std::max(std::abs(evals(n - 1)), 1e-300);
  // A finite ensemble of pure-noise records produces a Marchenko-Pastur
  // eigenvalue bulk whose upper edge sits at floor*(1+sqrt(n/m))^2 rather
  // than a numerically degenerate spectrum; a leading eigenvalue that does
  // not clear that edge carries no mode information, so flag it too.
  const double floor_estimate = evals(n / 2);
  const double ratio = std::sqrt(static_cast<double>(n) / m);
  const double bulk_edge = floor_estimate * (1.0 + ratio) * (1.0 + ratio);
  out.ambiguous = degenerate || evals(n - 1) <= 1.05 * bulk_edge;
  out.mode.assign(mode.data(), mode.data() + n);
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) out.eigenvalues.push_back(evals(i));
  return out;
}

std::vector<double> infer_phase_from_variance(const std::vector<double>& xs,
                                              double s_minus, double s_plus,
                                              int window_size) {
  if (!(s_plus > s_minus) || !(s_minus > 0.0)) {
    throw std::invalid_argument(
        "infer_phase_from_variance: need 0 < s_minus < s_plus (absolute "
        "variances, vacuum = 1/2)");
  }
  if (window_size < 2 || static_cast<int>(xs.size()) < window_size) {
    throw std::invalid_argument(
        "infer_phase_from_variance: need at least one full window");
  }
  std::vector<double> estimates;
  double prev = 0.0;
  bool first = true;
  const int n_windows = static_cast<int>(xs.size()) / window_size;
  for (int w = 0; w < n_windows; ++w) {
    const auto* begin = xs.data() + static_cast<std::size_t>(w) * window_size;
    double mean = 0.0;
    for (int i = 0; i < window_size; ++i) mean += begin[i];
    mean /= window_size;
    double var = 0.0;
    for (int i = 0; i < window_size; ++i) {
      var += (begin[i] - mean) * (begin[i] - mean);
    }
    var /= window_size - 1;

    const double ratio =
        std::clamp((var - s_minus) / (s_plus - s_minus), 0.0, 1.0);
    const double theta0 = std::asin(std::sqrt(ratio));  // [0, pi/2]

    if (first) {
      prev = theta0;
      first = false;
    } else {
      // sin^2 leaves the branch ambiguous: the true phase is m pi + theta0
      // or (m + 1) pi - theta0. Take the candidate nearest the previous
      // estimate, then clamp to non-decreasing -- the sweep is monotone, so
      // noise dips should flatten the estimate, not fold it onto the next
      // branch.
      double best = prev;
      double best_dist = std::numeric_limits<double>::infinity();
      const int m_lo = std::max(0, static_cast<int>(prev / M_PI) - 1);
      for (int m = m_lo; m <= m_lo + 3; ++m) {
        for (const double candidate :
             {m * M_PI + theta0, (m + 1) * M_PI - theta0}) {
          const double dist = std::abs(candidate - prev);
          if (dist < best_dist - 1e-12 ||
              (dist < best_dist + 1e-12 && candidate > best)) {
            best_dist = dist;
            best = candidate;
          }
        }
      }
      prev = std::max(prev, best);
    }
    estimates.push_back(prev);
  }
  return estimates;
}

}  // namespace opolab::homodyne
