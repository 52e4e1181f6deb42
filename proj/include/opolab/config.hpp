#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opolab::config {

/// Cavity and pump parameters of the parametric oscillator.
struct OpoSection {
  double T = 0.10;                      // output-coupler transmission
  double L = 0.0041667;                 // round-trip intracavity loss
  double fsr_hz = 4.3e9;                // free spectral range
  std::vector<double> pump_mw = {1.0};  // one or more pump powers
  double threshold_mw = 80.0;
  std::string type = "type_ii";  // "type_ii": heralded photon; "type_i": subtraction
  std::optional<double> halfwidth_mhz;  // measured half-width override

  double escape_efficiency() const;
  double pump() const { return pump_mw.front(); }
  double halfwidth_hz() const;  // override if present, else from fsr/T/L
};

/// Herald-path configuration for the on/off click detector.
struct HeraldSection {
  double tap_reflectivity = 0.03;
  double herald_efficiency = 0.05;
  double dark_rate_hz = 5.0;
  double click_rate_hz = 25e3;
  double rejection_db = 25.0;  // carried for provenance; folded into false clicks
  std::optional<double> false_click_fraction;  // override the rate-based value

  double false_click() const;  // override if present, else dark/(dark+click)
};

/// Homodyne detection-path efficiency budget.
struct DetectionSection {
  double visibility = 0.99;
  double photodiode_efficiency = 0.93;
  double propagation_efficiency = 0.97;
  double electronic_clearance_db = 20.0;
  std::optional<double> eta_total;  // override the factorized product

  double eta() const;  // override if present, else the product of all factors
};

/// Sweep timing and record geometry for the homodyne simulator.
struct HomodyneSection {
  double lock_s = 0.010;
  double measure_s = 0.090;
  double span_rad = M_PI;
  double record_dt_ns = 0.2;
  int record_samples = 500;
  std::optional<double> mode_gamma_rad_per_s;  // default: 2*pi*cavity half-width
};

/// Maximum-likelihood reconstruction settings.
struct TomographySection {
  int cutoff = 10;
  int phase_bins = 36;
  double x_bin_width = 0.05;
  int max_iterations = 5000;
  int bootstrap_replicas = 25;
};

/// Run bookkeeping: seeding, sample counts, output directory.
struct RunSection {
  std::uint64_t seed = 1;
  int n_samples = 50000;
  int n_records = 10000;
  std::string out = "out";
};

struct PipelineConfig {
  OpoSection opo;
  HeraldSection herald;
  DetectionSection detection;
  HomodyneSection homodyne;
  TomographySection tomography;
  RunSection run;

  /// Parses the sectioned key=value format. Unknown sections or keys,
  /// malformed lines, duplicate keys and out-of-range values all raise
  /// ConfigError with the offending line number.
  static PipelineConfig from_ini(const std::string& text);
  static PipelineConfig load(const std::string& path);

  /// Canonical echo of every resolved key; parses back to an equal config.
  std::string to_ini() const;

  /// Mode decay rate for record synthesis (override or 2*pi*half-width).
  double mode_gamma_rad_per_s() const;

  void validate() const;  // range checks; throws ConfigError
};

}  // namespace opolab::config
