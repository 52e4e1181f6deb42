#include "opolab/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "opolab/errors.hpp"
#include "opolab/herald.hpp"
#include "opolab/opo.hpp"
#include "opolab/version.hpp"

namespace opolab::config {

double OpoSection::escape_efficiency() const {
  return opo::escape_efficiency(T, L);
}

double OpoSection::halfwidth_hz() const {
  if (halfwidth_mhz) return *halfwidth_mhz * 1e6;
  return opo::cavity_halfwidth_hz(fsr_hz, T, L);
}

double HeraldSection::false_click() const {
  if (false_click_fraction) return *false_click_fraction;
  return herald::false_click_fraction(dark_rate_hz, click_rate_hz);
}

double DetectionSection::eta() const {
  if (eta_total) return *eta_total;
  return opo::visibility_to_efficiency(visibility) * photodiode_efficiency *
         propagation_efficiency *
         (1.0 - opo::electronic_noise_equivalent_loss(electronic_clearance_db));
}

double PipelineConfig::mode_gamma_rad_per_s() const {
  if (homodyne.mode_gamma_rad_per_s) return *homodyne.mode_gamma_rad_per_s;
  return 2.0 * M_PI * opo.halfwidth_hz();
}

namespace {

ConfigError line_error(int line, const std::string& what) {
  return ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() &&
         (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view value, int line) {
  value = trim(value);
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw line_error(line, "expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

int parse_int(std::string_view value, int line) {
  value = trim(value);
  int out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw line_error(line, "expected an integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view value, int line) {
  value = trim(value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw line_error(line, "expected an unsigned integer, got '" +
                               std::string(value) + "'");
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view value, int line) {
  std::vector<double> out;
  while (true) {
    const std::size_t comma = value.find(',');
    out.push_back(parse_double(value.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PipelineConfig PipelineConfig::from_ini(const std::string& text) {
  PipelineConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view raw(text.data() + pos,
                         (end == std::string::npos ? text.size() : end) - pos);
    pos = (end == std::string::npos) ? text.size() + 1 : end + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw line_error(line_no, "malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known = {
          "opo", "herald", "detection", "homodyne", "tomography", "run"};
      if (known.count(section) == 0) {
        throw line_error(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw line_error(line_no, "expected 'key = value'");
    }
    if (section.empty()) {
      throw line_error(line_no, "key outside any section");
    }
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw line_error(line_no, "expected 'key = value'");
    }
    const std::string qualified = section + "." + key;
    if (!seen.insert(qualified).second) {
      throw line_error(line_no, "duplicate key '" + qualified + "'");
    }

    if (section == "opo") {
      if (key == "T") cfg.opo.T = parse_double(value, line_no);
      else if (key == "L") cfg.opo.L = parse_double(value, line_no);
      else if (key == "fsr_hz") cfg.opo.fsr_hz = parse_double(value, line_no);
      else if (key == "pump_mw") cfg.opo.pump_mw = parse_double_list(value, line_no);
      else if (key == "threshold_mw") cfg.opo.threshold_mw = parse_double(value, line_no);
      else if (key == "type") {
        cfg.opo.type = std::string(value);
        if (cfg.opo.type != "type_i" && cfg.opo.type != "type_ii") {
          throw line_error(line_no, "type must be 'type_i' or 'type_ii'");
        }
      } else if (key == "halfwidth_mhz") {
        cfg.opo.halfwidth_mhz = parse_double(value, line_no);
      } else {
        throw line_error(line_no, "unknown key '" + qualified + "'");
      }
    } else if (section == "herald") {
      if (key == "tap_reflectivity") cfg.herald.tap_reflectivity = parse_double(value, line_no);
      else if (key == "herald_efficiency") cfg.herald.herald_efficiency = parse_double(value, line_no);
      else if (key == "dark_rate_hz") cfg.herald.dark_rate_hz = parse_double(value, line_no);
      else if (key == "click_rate_hz") cfg.herald.click_rate_hz = parse_double(value, line_no);
      else if (key == "rejection_db") cfg.herald.rejection_db = parse_double(value, line_no);
      else if (key == "false_click_fraction") cfg.herald.false_click_fraction = parse_double(value, line_no);
      else throw line_error(line_no, "unknown key '" + qualified + "'");
    } else if (section == "detection") {
      if (key == "visibility") cfg.detection.visibility = parse_double(value, line_no);
      else if (key == "photodiode_efficiency") cfg.detection.photodiode_efficiency = parse_double(value, line_no);
      else if (key == "propagation_efficiency") cfg.detection.propagation_efficiency = parse_double(value, line_no);
      else if (key == "electronic_clearance_db") cfg.detection.electronic_clearance_db = parse_double(value, line_no);
      else if (key == "eta_total") cfg.detection.eta_total = parse_double(value, line_no);
      else throw line_error(line_no, "unknown key '" + qualified + "'");
    } else if (section == "homodyne") {
      if (key == "lock_s") cfg.homodyne.lock_s = parse_double(value, line_no);
      else if (key == "measure_s") cfg.homodyne.measure_s = parse_double(value, line_no);
      else if (key == "span_rad") cfg.homodyne.span_rad = parse_double(value, line_no);
      else if (key == "record_dt_ns") cfg.homodyne.record_dt_ns = parse_double(value, line_no);
      else if (key == "record_samples") cfg.homodyne.record_samples = parse_int(value, line_no);
      else if (key == "mode_gamma_rad_per_s") cfg.homodyne.mode_gamma_rad_per_s = parse_double(value, line_no);
      else throw line_error(line_no, "unknown key '" + qualified + "'");
    } else if (section == "tomography") {
      if (key == "cutoff") cfg.tomography.cutoff = parse_int(value, line_no);
      else if (key == "phase_bins") cfg.tomography.phase_bins = parse_int(value, line_no);
      else if (key == "x_bin_width") cfg.tomography.x_bin_width = parse_double(value, line_no);
      else if (key == "max_iterations") cfg.tomography.max_iterations = parse_int(value, line_no);
      else if (key == "bootstrap_replicas") cfg.tomography.bootstrap_replicas = parse_int(value, line_no);
      else throw line_error(line_no, "unknown key '" + qualified + "'");
    } else if (section == "run") {
      if (key == "seed") cfg.run.seed = parse_u64(value, line_no);
      else if (key == "n_samples") cfg.run.n_samples = parse_int(value, line_no);
      else if (key == "n_records") cfg.run.n_records = parse_int(value, line_no);
      else if (key == "out") cfg.run.out = std::string(value);
      else throw line_error(line_no, "unknown key '" + qualified + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_ini(buffer.str());
}

void PipelineConfig::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(opo.T > 0.0 && opo.T <= 1.0)) fail("opo.T must lie in (0, 1]");
  if (!(opo.L >= 0.0 && opo.L < 1.0)) fail("opo.L must lie in [0, 1)");
  if (opo.T + opo.L > 1.0) fail("opo.T + opo.L must not exceed 1");
  if (!(opo.fsr_hz > 0.0)) fail("opo.fsr_hz must be positive");
  if (opo.pump_mw.empty()) fail("opo.pump_mw needs at least one value");
  for (double p : opo.pump_mw) {
    if (!(p >= 0.0) || !std::isfinite(p)) fail("opo.pump_mw entries must be >= 0");
  }
  if (!(opo.threshold_mw > 0.0)) fail("opo.threshold_mw must be positive");
  if (opo.type != "type_i" && opo.type != "type_ii") {
    fail("opo.type must be 'type_i' or 'type_ii'");
  }
  if (opo.halfwidth_mhz && !(*opo.halfwidth_mhz > 0.0)) {
    fail("opo.halfwidth_mhz must be positive");
  }

  if (!(herald.tap_reflectivity >= 0.0 && herald.tap_reflectivity <= 0.5)) {
    fail("herald.tap_reflectivity must lie in [0, 0.5]");
  }
  if (!(herald.herald_efficiency >= 0.0 && herald.herald_efficiency <= 1.0)) {
    fail("herald.herald_efficiency must lie in [0, 1]");
  }
  if (!(herald.dark_rate_hz >= 0.0)) fail("herald.dark_rate_hz must be >= 0");
  if (!(herald.click_rate_hz > 0.0)) fail("herald.click_rate_hz must be positive");
  if (!(herald.rejection_db > 0.0)) fail("herald.rejection_db must be positive");
  if (herald.false_click_fraction &&
      !(*herald.false_click_fraction >= 0.0 && *herald.false_click_fraction <= 1.0)) {
    fail("herald.false_click_fraction must lie in [0, 1]");
  }

  if (!(detection.visibility >= 0.0 && detection.visibility <= 1.0)) {
    fail("detection.visibility must lie in [0, 1]");
  }
  if (!(detection.photodiode_efficiency > 0.0 && detection.photodiode_efficiency <= 1.0)) {
    fail("detection.photodiode_efficiency must lie in (0, 1]");
  }
  if (!(detection.propagation_efficiency > 0.0 && detection.propagation_efficiency <= 1.0)) {
    fail("detection.propagation_efficiency must lie in (0, 1]");
  }
  if (!(detection.electronic_clearance_db > 0.0)) {
    fail("detection.electronic_clearance_db must be positive");
  }
  if (detection.eta_total && !(*detection.eta_total > 0.0 && *detection.eta_total <= 1.0)) {
    fail("detection.eta_total must lie in (0, 1]");
  }

  if (!(homodyne.lock_s >= 0.0)) fail("homodyne.lock_s must be >= 0");
  if (!(homodyne.measure_s > 0.0)) fail("homodyne.measure_s must be positive");
  if (!(homodyne.span_rad > 0.0)) fail("homodyne.span_rad must be positive");
  if (!(homodyne.record_dt_ns > 0.0)) fail("homodyne.record_dt_ns must be positive");
  if (homodyne.record_samples < 2) fail("homodyne.record_samples must be >= 2");
  if (homodyne.mode_gamma_rad_per_s && !(*homodyne.mode_gamma_rad_per_s > 0.0)) {
    fail("homodyne.mode_gamma_rad_per_s must be positive");
  }

  if (tomography.cutoff < 1) fail("tomography.cutoff must be >= 1");
  if (tomography.phase_bins < 1) fail("tomography.phase_bins must be >= 1");
  if (!(tomography.x_bin_width > 0.0)) fail("tomography.x_bin_width must be positive");
  if (tomography.max_iterations < 1) fail("tomography.max_iterations must be >= 1");
  if (tomography.bootstrap_replicas < 2) fail("tomography.bootstrap_replicas must be >= 2");

  if (run.n_samples < 1) fail("run.n_samples must be >= 1");
  if (run.n_records < 1) fail("run.n_records must be >= 1");
  if (run.out.empty()) fail("run.out must not be empty");
}

std::string PipelineConfig::to_ini() const {
  std::string out;
  out += "# opolab ";
  out += kVersion;
  out += " resolved configuration\n";
  out += "[opo]\n";
  out += "T = " + fmt(opo.T) + "\n";
  out += "L = " + fmt(opo.L) + "\n";
  out += "fsr_hz = " + fmt(opo.fsr_hz) + "\n";
  out += "pump_mw = ";
  for (std::size_t i = 0; i < opo.pump_mw.size(); ++i) {
    if (i > 0) out += ",";
    out += fmt(opo.pump_mw[i]);
  }
  out += "\n";
  out += "threshold_mw = " + fmt(opo.threshold_mw) + "\n";
  out += "type = " + opo.type + "\n";
  if (opo.halfwidth_mhz) out += "halfwidth_mhz = " + fmt(*opo.halfwidth_mhz) + "\n";
  out += "[herald]\n";
  out += "tap_reflectivity = " + fmt(herald.tap_reflectivity) + "\n";
  out += "herald_efficiency = " + fmt(herald.herald_efficiency) + "\n";
  out += "dark_rate_hz = " + fmt(herald.dark_rate_hz) + "\n";
  out += "click_rate_hz = " + fmt(herald.click_rate_hz) + "\n";
  out += "rejection_db = " + fmt(herald.rejection_db) + "\n";
  if (herald.false_click_fraction) {
    out += "false_click_fraction = " + fmt(*herald.false_click_fraction) + "\n";
  }
  out += "[detection]\n";
  out += "visibility = " + fmt(detection.visibility) + "\n";
  out += "photodiode_efficiency = " + fmt(detection.photodiode_efficiency) + "\n";
  out += "propagation_efficiency = " + fmt(detection.propagation_efficiency) + "\n";
  out += "electronic_clearance_db = " + fmt(detection.electronic_clearance_db) + "\n";
  if (detection.eta_total) out += "eta_total = " + fmt(*detection.eta_total) + "\n";
  out += "[homodyne]\n";
  out += "lock_s = " + fmt(homodyne.lock_s) + "\n";
  out += "measure_s = " + fmt(homodyne.measure_s) + "\n";
  out += "span_rad = " + fmt(homodyne.span_rad) + "\n";
  out += "record_dt_ns = " + fmt(homodyne.record_dt_ns) + "\n";
  out += "record_samples = " + std::to_string(homodyne.record_samples) + "\n";
  if (homodyne.mode_gamma_rad_per_s) {
    out += "mode_gamma_rad_per_s = " + fmt(*homodyne.mode_gamma_rad_per_s) + "\n";
  }
  out += "[tomography]\n";
  out += "cutoff = " + std::to_string(tomography.cutoff) + "\n";
  out += "phase_bins = " + std::to_string(tomography.phase_bins) + "\n";
  out += "x_bin_width = " + fmt(tomography.x_bin_width) + "\n";
  out += "max_iterations = " + std::to_string(tomography.max_iterations) + "\n";
  out += "bootstrap_replicas = " + std::to_string(tomography.bootstrap_replicas) + "\n";
  out += "[run]\n";
  out += "seed = " + std::to_string(run.seed) + "\n";
  out += "n_samples = " + std::to_string(run.n_samples) + "\n";
  out += "n_records = " + std::to_string(run.n_records) + "\n";
  out += "out = " + run.out + "\n";
  return out;
}

}  // namespace opolab::config
