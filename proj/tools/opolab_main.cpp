// Command-line driver for the conditional state-preparation toolkit:
// seeded, config-driven batch runs producing plot-ready CSV/JSON artifacts.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opolab/config.hpp"
#include "opolab/errors.hpp"
#include "opolab/fock.hpp"
#include "opolab/homodyne.hpp"
#include "opolab/pipeline.hpp"
#include "opolab/tomography.hpp"
#include "opolab/version.hpp"

namespace {

constexpr int kExitConfig = 2;       // bad config / malformed input files
constexpr int kExitPhysics = 3;      // physics-domain violation
constexpr int kExitNoConverge = 4;   // estimator or mode extraction ambiguity

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool has_out = false;
};

opolab::config::PipelineConfig resolve_config(const GlobalArgs& args) {
  opolab::config::PipelineConfig cfg;
  if (!args.config_path.empty()) {
    cfg = opolab::config::PipelineConfig::load(args.config_path);
  }
  if (args.has_seed) cfg.run.seed = args.seed;
  if (args.has_out) cfg.run.out = args.out_dir;
  cfg.validate();
  return cfg;
}

void note_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_spectra(const opolab::config::PipelineConfig& cfg) {
  opolab::pipeline::write_provenance(cfg.run.out, cfg);
  opolab::pipeline::write_text(cfg.run.out + "/spectra.csv",
                               opolab::pipeline::spectra_csv(cfg));
  std::cout << cfg.run.out << "/spectra.csv\n";
  return 0;
}

int cmd_prepare(const opolab::config::PipelineConfig& cfg,
                const std::string& scenario) {
  const opolab::pipeline::PreparedState prepared =
      opolab::pipeline::prepare(cfg, scenario);
  note_warnings(prepared.warnings);
  opolab::pipeline::write_provenance(cfg.run.out, cfg);
  opolab::pipeline::write_text(cfg.run.out + "/state_ideal.json",
                               prepared.ideal.to_json());
  opolab::pipeline::write_text(cfg.run.out + "/state_detected.json",
                               prepared.detected.to_json());
  opolab::pipeline::write_text(cfg.run.out + "/preparation.json",
                               prepared.summary_json(cfg));
  std::cout << cfg.run.out << "/state_ideal.json\n"
            << cfg.run.out << "/state_detected.json\n";
  return 0;
}

int cmd_sample(const opolab::config::PipelineConfig& cfg,
               const std::string& state_path, bool with_records) {
  const opolab::fock::DensityMatrix rho =
      opolab::fock::DensityMatrix::from_json_text(
          opolab::pipeline::read_text(state_path));
  opolab::homodyne::QuadratureSampler sampler(rho);
  opolab::homodyne::PhaseSweep sweep{cfg.homodyne.lock_s, cfg.homodyne.measure_s,
                                     cfg.homodyne.span_rad};

  const std::vector<opolab::homodyne::SampleEvent> events =
      opolab::homodyne::synthesize_sweep_samples(
          sampler, sweep, cfg.run.n_samples, cfg.herald.click_rate_hz,
          cfg.run.seed);
  opolab::pipeline::write_provenance(cfg.run.out, cfg);
  opolab::pipeline::write_text(cfg.run.out + "/quadratures.csv",
                               opolab::homodyne::samples_to_csv(events));
  std::cout << cfg.run.out << "/quadratures.csv\n";

  if (with_records) {
    std::vector<std::string> warnings;
    const std::vector<double> mode =
        opolab::homodyne::double_sided_exponential_mode(
            cfg.mode_gamma_rad_per_s(), cfg.homodyne.record_dt_ns * 1e-9,
            cfg.homodyne.record_samples, &warnings);
    note_warnings(warnings);
    const opolab::homodyne::RecordSet records =
        opolab::homodyne::synthesize_records(
            sampler, sweep, cfg.run.n_records, cfg.herald.click_rate_hz, mode,
            cfg.homodyne.record_dt_ns, cfg.run.seed + 1);
    records.save(cfg.run.out + "/records.hrv");
    std::cout << cfg.run.out << "/records.hrv\n";
  }
  return 0;
}

int cmd_tomo(const opolab::config::PipelineConfig& cfg,
             const std::string& data_path, bool with_bootstrap) {
  const std::vector<opolab::homodyne::SampleEvent> events =
      opolab::homodyne::samples_from_csv(
          opolab::pipeline::read_text(data_path));
  const opolab::tomo::Histogram histogram =
      opolab::tomo::Histogram::from_events(events, cfg.tomography.phase_bins,
                                           cfg.tomography.x_bin_width, 0.0,
                                           cfg.homodyne.span_rad);
  note_warnings(histogram.warnings);

  opolab::pipeline::write_provenance(cfg.run.out, cfg);
  bool all_converged = true;
  const struct {
    const char* label;
    double eta;
  } passes[2] = {{"uncorrected", 1.0}, {"corrected", cfg.detection.eta()}};
  for (const auto& pass : passes) {
    opolab::tomo::MleOptions options;
    options.cutoff = cfg.tomography.cutoff;
    options.eta = pass.eta;
    options.max_iterations = cfg.tomography.max_iterations;
    const opolab::tomo::MleResult fit =
        opolab::tomo::mle_reconstruct(histogram, options);
    note_warnings(fit.warnings);
    all_converged = all_converged && fit.converged;

    opolab::tomo::BootstrapSummary bootstrap;
    const opolab::tomo::BootstrapSummary* bootstrap_ptr = nullptr;
    if (with_bootstrap) {
      opolab::tomo::BootstrapOptions boot;
      boot.replicas = cfg.tomography.bootstrap_replicas;
      boot.seed = cfg.run.seed;
      bootstrap = opolab::tomo::bootstrap_mle(events, histogram, options, fit, boot);
      bootstrap_ptr = &bootstrap;
    }

    const std::string label = pass.label;
    opolab::pipeline::write_text(cfg.run.out + "/report_" + label + ".json",
                                 opolab::pipeline::report_json(fit, bootstrap_ptr));
    opolab::pipeline::write_text(cfg.run.out + "/rho_" + label + ".json",
                                 fit.rho.to_json());
    opolab::pipeline::write_text(cfg.run.out + "/wigner_" + label + ".csv",
                                 opolab::pipeline::wigner_csv(fit.rho));
    std::cout << cfg.run.out << "/report_" << label << ".json\n";
  }
  if (!all_converged) {
    std::cerr << "reconstruction hit the iteration cap before converging\n";
    return kExitNoConverge;
  }
  return 0;
}

int cmd_modes(const opolab::config::PipelineConfig& cfg,
              const std::string& records_path) {
  const opolab::homodyne::RecordSet records =
      opolab::homodyne::RecordSet::load(records_path);
  const opolab::homodyne::ModeExtraction extraction =
      opolab::homodyne::extract_mode_from_autocorrelation(records);
  const std::vector<double> reference =
      opolab::homodyne::double_sided_exponential_mode(
          cfg.mode_gamma_rad_per_s(), records.dt_ns * 1e-9, records.n_samples);

  double overlap = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    overlap += reference[i] * extraction.mode[i];
  }
  overlap = std::abs(overlap);

  opolab::pipeline::write_provenance(cfg.run.out, cfg);
  std::string mode_csv = "index,t_ns,mode,reference\n";
  char buf[192];
  for (std::size_t i = 0; i < extraction.mode.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g\n", i,
                  static_cast<double>(i) * records.dt_ns, extraction.mode[i],
                  reference[i]);
    mode_csv += buf;
  }
  opolab::pipeline::write_text(cfg.run.out + "/mode.csv", mode_csv);

  std::string spectrum_csv = "index,eigenvalue\n";
  for (std::size_t i = 0; i < extraction.eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g\n", i,
                  extraction.eigenvalues[i]);
    spectrum_csv += buf;
  }
  opolab::pipeline::write_text(cfg.run.out + "/spectrum.csv", spectrum_csv);

  std::snprintf(buf, sizeof(buf),
                "{\n  \"overlap\": %.10g,\n  \"leading_eigenvalue\": %.10g,\n"
                "  \"second_eigenvalue\": %.10g,\n  \"ambiguous\": %s,\n",
                overlap, extraction.leading_eigenvalue,
                extraction.second_eigenvalue,
                extraction.ambiguous ? "true" : "false");
  std::string summary = buf;
  summary += std::string("  \"version\": \"") + opolab::kVersion + "\"\n}\n";
  opolab::pipeline::write_text(cfg.run.out + "/mode_summary.json", summary);
  std::cout << cfg.run.out << "/mode_summary.json\n";

  if (extraction.ambiguous) {
    std::cerr << "leading autocorrelation eigenvalue is degenerate; the "
                 "extracted mode is not unique\n";
    return kExitNoConverge;
  }
  return 0;
}

int cmd_report(const opolab::config::PipelineConfig& cfg,
               const std::string& state_path) {
  const opolab::fock::DensityMatrix rho =
      opolab::fock::DensityMatrix::from_json_text(
          opolab::pipeline::read_text(state_path));
  opolab::pipeline::write_provenance(cfg.run.out, cfg);
  opolab::pipeline::write_text(cfg.run.out + "/report_state.json",
                               opolab::pipeline::state_report_json(rho));
  opolab::pipeline::write_text(cfg.run.out + "/wigner_state.csv",
                               opolab::pipeline::wigner_csv(rho));
  std::cout << cfg.run.out << "/report_state.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opolab: conditional non-Gaussian state preparation, homodyne "
               "simulation and tomography"};
  app.set_version_flag("--version", std::string(opolab::kVersion));
  app.require_subcommand(1);

  GlobalArgs globals;
  app.add_option("--config,-c", globals.config_path,
                 "sectioned key=value config file");
  auto* seed_opt =
      app.add_option("--seed", globals.seed, "override [run] seed");
  auto* out_opt =
      app.add_option("--out", globals.out_dir, "override [run] out directory");

  auto* spectra = app.add_subcommand(
      "spectra", "quadrature noise spectra relative to shot noise (CSV)");

  std::string scenario;
  auto* prepare = app.add_subcommand(
      "prepare", "run a conditional preparation chain, write state JSONs");
  prepare->add_option("scenario", scenario,
                      "single_photon or kitten (default: from [opo] type)");

  std::string state_path;
  bool with_records = false;
  auto* sample = app.add_subcommand(
      "sample", "draw phase-swept quadrature samples from a state JSON");
  sample->add_option("--state", state_path, "state JSON to sample from")
      ->required();
  sample->add_flag("--records", with_records,
                   "also synthesize full homodyne records");
  int samples_override = 0;
  auto* samples_opt = sample->add_option(
      "--samples", samples_override, "override [run] n_samples");

  std::string data_path;
  bool with_bootstrap = false;
  auto* tomo = app.add_subcommand(
      "tomo", "maximum-likelihood reconstruction from a quadrature CSV");
  tomo->add_option("--data", data_path, "quadrature CSV dataset")->required();
  tomo->add_flag("--bootstrap", with_bootstrap,
                 "attach segment-resampled error bars to the reports");

  std::string records_path;
  auto* modes = app.add_subcommand(
      "modes", "extract the dominant temporal mode from a record store");
  modes->add_option("--records", records_path, "homodyne record store")
      ->required();

  std::string report_state_path;
  auto* report = app.add_subcommand(
      "report", "photon statistics / Wigner analysis of a state JSON");
  report->add_option("--state", report_state_path, "state JSON to analyze")
      ->required();

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  globals.has_seed = seed_opt->count() > 0;
  globals.has_out = out_opt->count() > 0;

  try {
    opolab::config::PipelineConfig cfg = resolve_config(globals);
    if (samples_opt->count() > 0) {
      cfg.run.n_samples = samples_override;
      cfg.validate();
    }
    if (spectra->parsed()) return cmd_spectra(cfg);
    if (prepare->parsed()) return cmd_prepare(cfg, scenario);
    if (sample->parsed()) return cmd_sample(cfg, state_path, with_records);
    if (tomo->parsed()) return cmd_tomo(cfg, data_path, with_bootstrap);
    if (modes->parsed()) return cmd_modes(cfg, records_path);
    if (report->parsed()) return cmd_report(cfg, report_state_path);
    std::cerr << "no subcommand\n";
    return kExitConfig;
  } catch (const opolab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const opolab::ConvergenceError& e) {
    std::cerr << "did not converge: " << e.what() << "\n";
    return kExitNoConverge;
  } catch (const std::domain_error& e) {
    std::cerr << "physics domain error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
