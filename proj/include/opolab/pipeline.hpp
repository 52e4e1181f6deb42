#pragma once

#include <string>
#include <vector>

#include "opolab/config.hpp"
#include "opolab/fock.hpp"
#include "opolab/tomography.hpp"

namespace opolab::pipeline {

/// Output of one conditional-preparation chain.
struct PreparedState {
  std::string scenario;          // "single_photon" or "kitten"
  fock::DensityMatrix ideal;     // after escape loss, before detection loss
  fock::DensityMatrix detected;  // what the homodyne station sees
  double sigma = 0.0;            // normalized pump amplitude
  double pair_amplitude = 0.0;   // type-II pair amplitude (single photon)
  double squeezing_r = 0.0;      // type-I input squeezing (kitten)
  double success_probability = 0.0;
  double false_click_fraction = 0.0;
  std::vector<std::string> warnings;

  std::string summary_json(const config::PipelineConfig& cfg) const;
};

/// Heralded single photon: two-mode squeezed vacuum, idler click, escape
/// loss, then detection loss. Requires [opo] type = type_ii.
PreparedState prepare_single_photon(const config::PipelineConfig& cfg);

/// Photon-subtracted squeezed vacuum: squeezed vacuum, escape loss, tap +
/// idler click, then detection loss. Requires [opo] type = type_i.
PreparedState prepare_kitten(const config::PipelineConfig& cfg);

/// Dispatch by scenario name ("single_photon" / "kitten"); empty scenario
/// picks the one matching [opo] type.
PreparedState prepare(const config::PipelineConfig& cfg,
                      const std::string& scenario);

/// Quadrature-noise spectra relative to shot noise over 0-50 MHz in 0.1 MHz
/// steps. One pump power gives columns freq_hz,s_minus_db,s_plus_db; with
/// several pump powers the value columns repeat with _<power>mw suffixes.
std::string spectra_csv(const config::PipelineConfig& cfg);

/// State-analysis block shared by all reports: populations, parity, central
/// Wigner value, fidelity with the single photon and with the best
/// odd-cat-state fit.
std::string state_report_json(const fock::DensityMatrix& rho);

/// Full reconstruction report.
std::string report_json(const tomo::MleResult& fit,
                        const tomo::BootstrapSummary* bootstrap = nullptr);

/// 81 x 81 Wigner map over [-3, 3]^2 as CSV.
std::string wigner_csv(const fock::DensityMatrix& rho);

/// Creates out_dir (recursively) and drops the resolved config echo with
/// the toolkit version into it.
void write_provenance(const std::string& out_dir,
                      const config::PipelineConfig& cfg);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace opolab::pipeline
