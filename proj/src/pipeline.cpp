#include "opolab/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opolab/channels.hpp"
#include "opolab/errors.hpp"
#include "opolab/herald.hpp"
#include "opolab/opo.hpp"
#include "opolab/version.hpp"

namespace opolab::pipeline {

namespace {

int preparation_dim(const config::PipelineConfig& cfg, bool kitten) {
  // The kitten chain starts from a squeezed vacuum whose number tail decays
  // slowly (ratio tanh r per pair), so it gets more headroom than the
  // pair-amplitude-suppressed heralded photon.
  return std::max(cfg.tomography.cutoff + 1, kitten ? 20 : 12);
}

void append(std::vector<std::string>& into, const std::vector<std::string>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

}  // namespace

PreparedState prepare_single_photon(const config::PipelineConfig& cfg) {
  if (cfg.opo.type != "type_ii") {
    throw ConfigError(
        "single_photon preparation needs [opo] type = type_ii (nondegenerate "
        "signal/idler pairs)");
  }
  PreparedState out;
  out.scenario = "single_photon";
  out.sigma = opo::pump_parameter(cfg.opo.pump(), cfg.opo.threshold_mw);
  out.pair_amplitude = out.sigma;
  out.false_click_fraction = cfg.herald.false_click();

  const int dim = preparation_dim(cfg, false);
  opo::TruncationReport trunc;
  const fock::TwoModeState pairs =
      opo::two_mode_squeezed_vacuum(out.pair_amplitude, dim, &trunc);
  append(out.warnings, trunc.warnings);

  const herald::HeraldResult heralded = herald::herald_single_photon(
      pairs, cfg.herald.herald_efficiency, out.false_click_fraction);
  append(out.warnings, heralded.warnings);
  out.success_probability = heralded.success_probability;

  out.ideal = channels::loss_apply(heralded.state, cfg.opo.escape_efficiency());
  out.detected = channels::loss_apply(out.ideal, cfg.detection.eta());
  return out;
}

PreparedState prepare_kitten(const config::PipelineConfig& cfg) {
  if (cfg.opo.type != "type_i") {
    throw ConfigError(
        "kitten preparation needs [opo] type = type_i (degenerate squeezed "
        "vacuum)");
  }
  PreparedState out;
  out.scenario = "kitten";
  out.sigma = opo::pump_parameter(cfg.opo.pump(), cfg.opo.threshold_mw);
  out.squeezing_r = opo::squeezing_parameter(out.sigma);
  out.false_click_fraction = cfg.herald.false_click();

  const int dim = preparation_dim(cfg, true);
  opo::TruncationReport trunc;
  const fock::Vector ket =
      opo::squeezed_vacuum_ket(out.squeezing_r, dim, &trunc);
  append(out.warnings, trunc.warnings);

  const fock::DensityMatrix at_tap = channels::loss_apply(
      fock::DensityMatrix::from_ket(ket), cfg.opo.escape_efficiency());
  const herald::SubtractionResult subtracted = herald::subtract_photon(
      at_tap, cfg.herald.tap_reflectivity, cfg.herald.herald_efficiency,
      out.false_click_fraction);
  append(out.warnings, subtracted.warnings);
  out.success_probability = subtracted.click_probability;

  out.ideal = subtracted.state;
  out.detected = channels::loss_apply(out.ideal, cfg.detection.eta());
  return out;
}

PreparedState prepare(const config::PipelineConfig& cfg,
                      const std::string& scenario) {
  std::string which = scenario;
  if (which.empty()) {
    which = (cfg.opo.type == "type_i") ? "kitten" : "single_photon";
  }
  if (which == "single_photon") return prepare_single_photon(cfg);
  if (which == "kitten") return prepare_kitten(cfg);
  throw ConfigError("unknown scenario '" + which +
                    "' (expected single_photon or kitten)");
}

std::string PreparedState::summary_json(const config::PipelineConfig& cfg) const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["sigma"] = sigma;
  if (scenario == "single_photon") j["pair_amplitude"] = pair_amplitude;
  if (scenario == "kitten") j["squeezing_r"] = squeezing_r;
  j["escape_efficiency"] = cfg.opo.escape_efficiency();
  j["detection_efficiency"] = cfg.detection.eta();
  j["false_click_fraction"] = false_click_fraction;
  j["success_probability"] = success_probability;
  j["warnings"] = warnings;
  j["version"] = kVersion;
  return j.dump(2) + "\n";
}

std::string spectra_csv(const config::PipelineConfig& cfg) {
  const double gamma_hz = cfg.opo.halfwidth_hz();
  const double eta_total = cfg.opo.escape_efficiency() * cfg.detection.eta();
  std::vector<double> sigmas;
  sigmas.reserve(cfg.opo.pump_mw.size());
  for (double pump : cfg.opo.pump_mw) {
    sigmas.push_back(opo::pump_parameter(pump, cfg.opo.threshold_mw));
  }

  std::string out;
  if (cfg.opo.pump_mw.size() == 1) {
    out = "freq_hz,s_minus_db,s_plus_db\n";
  } else {
    out = "freq_hz";
    char label[80];
    for (double pump : cfg.opo.pump_mw) {
      std::snprintf(label, sizeof(label), ",s_minus_db_%gmw,s_plus_db_%gmw",
                    pump, pump);
      out += label;
    }
    out += "\n";
  }

  char buf[64];
  constexpr int kSteps = 500;  // 0-50 MHz in 0.1 MHz steps
  for (int i = 0; i <= kSteps; ++i) {
    const double freq_hz = i * 1e5;
    std::snprintf(buf, sizeof(buf), "%.10g", freq_hz);
    out += buf;
    for (double sigma : sigmas) {
      const opo::SqueezingSpectrumPoint point =
          opo::squeezing_spectrum_point(freq_hz, sigma, gamma_hz, eta_total);
      std::snprintf(buf, sizeof(buf), ",%.10g,%.10g", point.s_minus_db,
                    point.s_plus_db);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

namespace {

nlohmann::json analysis_json(const fock::DensityMatrix& rho) {
  nlohmann::json j;
  const fock::PhotonStatistics stats = fock::photon_statistics(rho);
  j["populations"] = stats.populations;
  j["parity"] = stats.parity;
  j["w00"] = fock::wigner_point(rho, 0.0, 0.0);

  fock::Vector one = fock::Vector::Zero(2);
  one(1) = 1.0;
  const herald::CssFit css = herald::best_css_fit(rho);
  j["fidelities"] = {{"fock_1", fock::fidelity(rho, one)},
                     {"best_css", css.fidelity},
                     {"best_css_alpha", css.alpha},
                     {"best_css_at_scan_edge", css.at_scan_edge}};
  return j;
}

}  // namespace

std::string state_report_json(const fock::DensityMatrix& rho) {
  nlohmann::json j = analysis_json(rho);
  j["version"] = kVersion;
  return j.dump(2) + "\n";
}

std::string report_json(const tomo::MleResult& fit,
                        const tomo::BootstrapSummary* bootstrap) {
  nlohmann::json j = analysis_json(fit.rho);
  j["likelihood_trace"] = fit.likelihood_trace;
  j["converged"] = fit.converged;
  j["eta"] = fit.eta;
  j["iterations"] = fit.iterations;
  j["stop_reason"] = fit.stop_reason;
  j["warnings"] = fit.warnings;
  j["version"] = kVersion;
  if (bootstrap != nullptr) {
    j["bootstrap"] = {{"replicas", bootstrap->replicas},
                      {"population_mean", bootstrap->population_mean},
                      {"population_std", bootstrap->population_std},
                      {"parity_mean", bootstrap->parity_mean},
                      {"parity_std", bootstrap->parity_std},
                      {"w00_mean", bootstrap->w00_mean},
                      {"w00_std", bootstrap->w00_std}};
  }
  return j.dump(2) + "\n";
}

std::string wigner_csv(const fock::DensityMatrix& rho) {
  return fock::wigner_square_grid(rho, 3.0, 81).to_csv();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed while writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_provenance(const std::string& out_dir,
                      const config::PipelineConfig& cfg) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/config_echo.ini", cfg.to_ini());
}

}  // namespace opolab::pipeline
