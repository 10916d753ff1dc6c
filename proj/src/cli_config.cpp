#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "roadloc/cli.hpp"

namespace roadloc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, const std::string& key, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' needs a finite number, got '" + value + "'",
                      line);
  }
}

std::uint64_t to_uint(const std::string& value, const std::string& key,
                      std::size_t line) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' needs a non-negative integer, got '" + value + "'",
                      line);
  }
}

bool to_bool(const std::string& value, const std::string& key, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                        "' needs true/false, got '" + value + "'",
                    line);
}

}  // namespace

CameraConfig RunConfig::camera() const {
  CameraConfig cam;
  cam.focal_length_cm = focal_length_cm;
  cam.height_cm = height_cm;
  cam.pitch_rad = theta_deg * kPi / 180.0;
  cam.vfov_rad = vfov_deg * kPi / 180.0;
  cam.hfov_rad = hfov_deg * kPi / 180.0;
  cam.noise_density = noise_density;
  return cam;
}

ExperimentConfig RunConfig::experiment() const {
  ExperimentConfig exp;
  exp.camera = camera();
  exp.cell_side_cm = cell_side_cm;
  exp.lateral_offset_cm = lateral_offset_cm;
  exp.trials_per_amplitude = trials;
  exp.master_seed = master_seed;
  exp.threads = threads;
  exp.record_stddev = record_stddev;
  if (mode == "analytic")
    exp.mode = ExperimentConfig::Mode::analytic;
  else if (mode == "empirical")
    exp.mode = ExperimentConfig::Mode::empirical;
  else
    throw ConfigError("mode must be 'analytic' or 'empirical', got '" + mode + "'");

  if (!(amp_step > 0.0)) throw ConfigError("amp_step must be positive");
  if (!(amp_min > 0.0)) throw ConfigError("amp_min must be positive");
  if (amp_max < amp_min) throw ConfigError("amp_max must be at least amp_min");
  const std::size_t n =
      static_cast<std::size_t>(std::floor((amp_max - amp_min) / amp_step + 1e-9)) + 1;
  exp.amplitudes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    exp.amplitudes.push_back(amp_min + static_cast<double>(i) * amp_step);
  return exp;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;

  const std::map<std::string, std::function<void(const std::string&, std::size_t)>>
      setters = {
          {"focal_length_cm",
           [&](const std::string& v, std::size_t l) { cfg.focal_length_cm = to_double(v, "focal_length_cm", l); }},
          {"height_cm",
           [&](const std::string& v, std::size_t l) { cfg.height_cm = to_double(v, "height_cm", l); }},
          {"theta_deg",
           [&](const std::string& v, std::size_t l) { cfg.theta_deg = to_double(v, "theta_deg", l); }},
          {"vfov_deg",
           [&](const std::string& v, std::size_t l) { cfg.vfov_deg = to_double(v, "vfov_deg", l); }},
          {"hfov_deg",
           [&](const std::string& v, std::size_t l) { cfg.hfov_deg = to_double(v, "hfov_deg", l); }},
          {"noise_density",
           [&](const std::string& v, std::size_t l) { cfg.noise_density = to_double(v, "noise_density", l); }},
          {"n0",
           [&](const std::string& v, std::size_t l) { cfg.noise_density = to_double(v, "n0", l); }},
          {"cell_side_cm",
           [&](const std::string& v, std::size_t l) { cfg.cell_side_cm = to_double(v, "cell_side_cm", l); }},
          {"lateral_offset_cm",
           [&](const std::string& v, std::size_t l) { cfg.lateral_offset_cm = to_double(v, "lateral_offset_cm", l); }},
          {"amp_min",
           [&](const std::string& v, std::size_t l) { cfg.amp_min = to_double(v, "amp_min", l); }},
          {"amp_max",
           [&](const std::string& v, std::size_t l) { cfg.amp_max = to_double(v, "amp_max", l); }},
          {"amp_step",
           [&](const std::string& v, std::size_t l) { cfg.amp_step = to_double(v, "amp_step", l); }},
          {"trials",
           [&](const std::string& v, std::size_t l) {
             cfg.trials = static_cast<std::size_t>(to_uint(v, "trials", l));
           }},
          {"master_seed",
           [&](const std::string& v, std::size_t l) { cfg.master_seed = to_uint(v, "master_seed", l); }},
          {"mode", [&](const std::string& v, std::size_t) { cfg.mode = v; }},
          {"threads",
           [&](const std::string& v, std::size_t l) {
             cfg.threads = static_cast<unsigned>(to_uint(v, "threads", l));
           }},
          {"record_stddev",
           [&](const std::string& v, std::size_t l) { cfg.record_stddev = to_bool(v, "record_stddev", l); }},
          {"samples_per_cell",
           [&](const std::string& v, std::size_t l) {
             cfg.samples_per_cell = static_cast<std::size_t>(to_uint(v, "samples_per_cell", l));
           }},
          {"amp_scale",
           [&](const std::string& v, std::size_t l) { cfg.amp_scale = to_double(v, "amp_scale", l); }},
          {"snr_amplitude",
           [&](const std::string& v, std::size_t l) { cfg.snr_amplitude = to_double(v, "snr_amplitude", l); }},
      };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                            ": expected 'key = value', got '" + stripped + "'",
                        line_no);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                            ": expected 'key = value', got '" + stripped + "'",
                        line_no);

    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                        line_no);
    it->second(value, line_no);
  }

  // Surface range problems at parse time, with config wording.
  try {
    cfg.camera().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("camera constraint violated: ") + e.what());
  }
  if (!(cfg.cell_side_cm > 0.0)) throw ConfigError("cell_side_cm must be positive");
  if (cfg.trials == 0) throw ConfigError("trials must be positive");
  if (cfg.threads == 0) throw ConfigError("threads must be positive");
  if (cfg.samples_per_cell == 0) throw ConfigError("samples_per_cell must be positive");
  if (!(cfg.amp_scale > 0.0)) throw ConfigError("amp_scale must be positive");
  if (cfg.mode != "analytic" && cfg.mode != "empirical")
    throw ConfigError("mode must be 'analytic' or 'empirical', got '" + cfg.mode + "'");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line);
  }
}

}  // namespace roadloc
