// Command-line front end. Subcommands:
//
//   geometry  — table of visible cells with footprint areas and weights
//   snr       — per-cell signal-to-noise at a given amplitude
//   simulate  — amplitude sweep comparing both matchers (CSV curve)
//   classify  — best-offset match of an observation against a map file
//   rectify   — PGM image to per-cell amplitude file
//
// All parameters live in an optional key = value config file; command
// line flags override it. Every subcommand is deterministic given the
// config and seed. run_cli is the testable entry point behind main().

#ifndef ROADLOC_CLI_HPP
#define ROADLOC_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "roadloc/camera_geometry.hpp"
#include "roadloc/experiment.hpp"

namespace roadloc {

/// Config-file problem; carries the file-relative line number when the
/// problem is tied to one line (0 otherwise).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string msg, std::size_t line_no = 0)
      : std::runtime_error(std::move(msg)), line(line_no) {}

  std::size_t line;
};

/// Every tunable, preloaded with the stock survey-camera setup:
/// 0.0367 cm focal length, 58.3095 cm height, 35.902 degree downward
/// pitch, 39.2962 x 70.5288 degree field of view, noise density 0.0018,
/// 20 cm cells with the grid anchored 10 cm left of the camera axis.
struct RunConfig {
  double focal_length_cm = 0.0367;
  double height_cm = 58.3095;
  double theta_deg = 35.9020;
  double vfov_deg = 39.2962;
  double hfov_deg = 70.5288;
  double noise_density = 0.0018;

  double cell_side_cm = 20.0;
  double lateral_offset_cm = -10.0;

  double amp_min = 0.1;
  double amp_max = 10.0;
  double amp_step = 0.1;
  std::size_t trials = 10000;
  std::uint64_t master_seed = 1;
  std::string mode = "analytic";
  unsigned threads = 1;
  bool record_stddev = false;

  std::size_t samples_per_cell = 8;
  double amp_scale = 1.0;
  double snr_amplitude = 1.0;

  CameraConfig camera() const;
  ExperimentConfig experiment() const;  ///< builds the amplitude list too
};

/// Parses `key = value` text ('#' comments, blank lines allowed) on top
/// of the defaults. Unknown keys, malformed values, and out-of-range
/// settings throw ConfigError with the offending line number.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

/// Full CLI. Returns a process exit code:
///   0 success, 1 usage error, 2 config error, 3 file I/O error,
///   4 invalid input or geometry.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roadloc

#endif  // ROADLOC_CLI_HPP
