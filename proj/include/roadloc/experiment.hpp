// Monte Carlo comparison of the weighted and Euclidean matchers over a
// sweep of road amplitudes.
//
// Each trial draws an independent pair of +/-amplitude candidate vectors
// over the visible cells (resampling until they differ) and scores the
// confusion one way or the other:
//
//   analytic mode  — averages the closed-form pairwise error of each
//                    matcher over the drawn pairs;
//   empirical mode — synthesizes a noisy observation of the first vector
//                    and counts actual misclassifications.
//
// Trials are seeded individually via derive_seed(master, amplitude index,
// trial index), and per-amplitude results are accumulated with Neumaier
// compensated summation in trial order, so output is byte-identical for
// any thread count.

#ifndef ROADLOC_EXPERIMENT_HPP
#define ROADLOC_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roadloc/camera_geometry.hpp"

namespace roadloc {

struct ExperimentConfig {
  enum class Mode { analytic, empirical };

  CameraConfig camera;
  double cell_side_cm = 20.0;
  double lateral_offset_cm = -10.0;
  std::vector<double> amplitudes;      ///< strictly increasing, all > 0
  std::size_t trials_per_amplitude = 10000;
  std::uint64_t master_seed = 1;
  Mode mode = Mode::analytic;
  unsigned threads = 1;                ///< worker threads over amplitude points
  bool record_stddev = false;          ///< adds per-point sample stddev columns

  void validate() const;  ///< throws std::invalid_argument
};

/// One row per amplitude; stddev columns filled when requested.
struct ErrorCurve {
  std::vector<double> amplitude;
  std::vector<double> p_err_standard;
  std::vector<double> p_err_generalized;
  std::vector<double> sd_standard;
  std::vector<double> sd_generalized;

  std::size_t size() const { return amplitude.size(); }
};

ErrorCurve run_amplitude_sweep(const ExperimentConfig& cfg);

/// CSV with header "amplitude,p_err_standard,p_err_generalized" (plus
/// ",sd_standard,sd_generalized" when stddev columns are present), values
/// at 9 significant digits.
void write_curve_csv(const ErrorCurve& curve, std::ostream& out);
void write_curve_csv(const ErrorCurve& curve, const std::string& path);

/// Inverse of write_curve_csv; throws std::runtime_error with the line
/// number on malformed input.
ErrorCurve read_curve_csv(std::istream& in, const std::string& label);
ErrorCurve read_curve_csv(const std::string& path);

}  // namespace roadloc

#endif  // ROADLOC_EXPERIMENT_HPP
