#include "roadloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "roadloc/matcher.hpp"
#include "roadloc/rng.hpp"
#include "roadloc/sensing.hpp"

namespace roadloc {

namespace {

// Neumaier variant of compensated summation: tracks the rounding error of
// every add, including when the addend dominates the running sum.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      comp_ += (sum_ - t) + value;
    else
      comp_ += (value - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct PointResult {
  double p_standard = 0.0;
  double p_generalized = 0.0;
  double sd_standard = 0.0;
  double sd_generalized = 0.0;
};

// Draws a +/-amplitude sign pattern into `out` using one fair bit per cell.
void draw_signs(Xoshiro256pp& rng, double amplitude, std::vector<double>& out) {
  for (auto& v : out) v = rng.sign_bit() ? amplitude : -amplitude;
}

bool equal_vectors(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return false;
  return true;
}

// Mean and sample standard deviation of `values`, compensated, two passes.
void mean_and_sd(const std::vector<double>& values, double& mean, double& sd) {
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double n = static_cast<double>(values.size());
  mean = sum.value() / n;
  if (values.size() < 2) {
    sd = 0.0;
    return;
  }
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  sd = std::sqrt(sq.value() / (n - 1.0));
}

class SweepContext {
 public:
  explicit SweepContext(const ExperimentConfig& cfg)
      : cfg_(cfg),
        grid_(visible_cell_grid(cfg.camera, cfg.cell_side_cm, cfg.lateral_offset_cm)) {
    if (grid_.size() == 0)
      throw std::invalid_argument("run_amplitude_sweep: no visible cells");
    weights_ = gramian_weights(grid_.cells, cfg.camera);
    prefactor_ = snr_prefactor(cfg.camera);
    for (const auto& cell : grid_.cells)
      sigmas_.push_back(std::sqrt(cell_noise_variance(cell, cfg.camera)));
  }

  PointResult run_point(std::size_t amp_index) const {
    const double amplitude = cfg_.amplitudes[amp_index];
    const std::size_t n_cells = grid_.size();
    const std::size_t trials = cfg_.trials_per_amplitude;

    std::vector<double> u_star(n_cells), u_hat(n_cells), noise(n_cells), obs(n_cells);
    std::vector<double> per_trial_std(trials), per_trial_gen(trials);

    for (std::size_t t = 0; t < trials; ++t) {
      Xoshiro256pp rng(derive_seed(cfg_.master_seed, amp_index, t));
      draw_signs(rng, amplitude, u_star);
      do {
        draw_signs(rng, amplitude, u_hat);
      } while (equal_vectors(u_star, u_hat));

      if (cfg_.mode == ExperimentConfig::Mode::analytic) {
        per_trial_gen[t] = 1.0 - std_normal_cdf(weighted_error_argument(
                                     u_star, u_hat, weights_.g, prefactor_));
        per_trial_std[t] = 1.0 - std_normal_cdf(unweighted_error_argument(
                                     u_star, u_hat, weights_.g, prefactor_));
      } else {
        fill_gaussian(rng, noise);
        for (std::size_t k = 0; k < n_cells; ++k)
          obs[k] = u_star[k] + sigmas_[k] * noise[k];
        per_trial_gen[t] = prefers_impostor(obs, u_star, u_hat, weights_.g.data());
        per_trial_std[t] = prefers_impostor(obs, u_star, u_hat, nullptr);
      }
    }

    PointResult r;
    mean_and_sd(per_trial_std, r.p_standard, r.sd_standard);
    mean_and_sd(per_trial_gen, r.p_generalized, r.sd_generalized);
    return r;
  }

  std::size_t point_count() const { return cfg_.amplitudes.size(); }

 private:
  // 1.0 when the (possibly weighted) squared distance prefers the impostor.
  // Exact ties stay with the true vector, matching the classifier's
  // lowest-index rule with the true candidate listed first.
  static double prefers_impostor(const std::vector<double>& obs,
                                 const std::vector<double>& u_star,
                                 const std::vector<double>& u_hat, const double* g) {
    double score_star = 0.0, score_hat = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const double w = g ? g[k] : 1.0;
      const double ds = obs[k] - u_star[k];
      const double dh = obs[k] - u_hat[k];
      score_star += w * ds * ds;
      score_hat += w * dh * dh;
    }
    return score_hat < score_star ? 1.0 : 0.0;
  }

  const ExperimentConfig& cfg_;
  CellGrid grid_;
  WeightVector weights_;
  double prefactor_ = 0.0;
  std::vector<double> sigmas_;
};

}  // namespace

void ExperimentConfig::validate() const {
  camera.validate();
  if (!(cell_side_cm > 0.0))
    throw std::invalid_argument("ExperimentConfig: cell_side_cm must be positive");
  if (!std::isfinite(lateral_offset_cm))
    throw std::invalid_argument("ExperimentConfig: lateral_offset_cm must be finite");
  if (amplitudes.empty())
    throw std::invalid_argument("ExperimentConfig: amplitude list is empty");
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] > 0.0) || !std::isfinite(amplitudes[i]))
      throw std::invalid_argument("ExperimentConfig: amplitudes must be positive");
    if (i > 0 && !(amplitudes[i] > amplitudes[i - 1]))
      throw std::invalid_argument("ExperimentConfig: amplitudes must be strictly increasing");
  }
  if (trials_per_amplitude == 0)
    throw std::invalid_argument("ExperimentConfig: trials_per_amplitude must be positive");
  if (threads == 0)
    throw std::invalid_argument("ExperimentConfig: threads must be positive");
}

ErrorCurve run_amplitude_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepContext ctx(cfg);

  const std::size_t n_points = ctx.point_count();
  std::vector<PointResult> results(n_points);

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, n_points));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_points; ++i) results[i] = ctx.run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < n_points; i = next.fetch_add(1))
        results[i] = ctx.run_point(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  ErrorCurve curve;
  curve.amplitude = cfg.amplitudes;
  for (const auto& r : results) {
    curve.p_err_standard.push_back(r.p_standard);
    curve.p_err_generalized.push_back(r.p_generalized);
    if (cfg.record_stddev) {
      curve.sd_standard.push_back(r.sd_standard);
      curve.sd_generalized.push_back(r.sd_generalized);
    }
  }

  // Per-pair dominance makes this exact in analytic mode; a violation
  // means numerical corruption. (Empirical curves can cross by noise.)
  if (cfg.mode == ExperimentConfig::Mode::analytic)
    for (std::size_t i = 0; i < curve.size(); ++i)
      if (curve.p_err_generalized[i] > curve.p_err_standard[i] + 1e-12)
        throw std::logic_error(
            "run_amplitude_sweep: weighted error exceeded standard error at amplitude " +
            std::to_string(curve.amplitude[i]));

  return curve;
}

void write_curve_csv(const ErrorCurve& curve, std::ostream& out) {
  const bool with_sd = !curve.sd_standard.empty();
  if (curve.p_err_standard.size() != curve.size() ||
      curve.p_err_generalized.size() != curve.size() ||
      (with_sd && (curve.sd_standard.size() != curve.size() ||
                   curve.sd_generalized.size() != curve.size())))
    throw std::invalid_argument("write_curve_csv: ragged curve columns");

  out << "amplitude,p_err_standard,p_err_generalized";
  if (with_sd) out << ",sd_standard,sd_generalized";
  out << '\n';
  char buf[160];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (with_sd)
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g", curve.amplitude[i],
                    curve.p_err_standard[i], curve.p_err_generalized[i],
                    curve.sd_standard[i], curve.sd_generalized[i]);
    else
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g", curve.amplitude[i],
                    curve.p_err_standard[i], curve.p_err_generalized[i]);
    out << buf << '\n';
  }
}

void write_curve_csv(const ErrorCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open curve file for writing: " + path);
  write_curve_csv(curve, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for curve file: " + path);
}

ErrorCurve read_curve_csv(std::istream& in, const std::string& label) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw std::runtime_error(label + ":1: empty input, expected CSV header");
  ++line_no;

  bool with_sd = false;
  if (line == "amplitude,p_err_standard,p_err_generalized,sd_standard,sd_generalized")
    with_sd = true;
  else if (line != "amplitude,p_err_standard,p_err_generalized")
    throw std::runtime_error(label + ":1: unrecognized CSV header '" + line + "'");

  ErrorCurve curve;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    const std::size_t n_fields = with_sd ? 5 : 3;
    double fields[5] = {0, 0, 0, 0, 0};
    for (std::size_t f = 0; f < n_fields; ++f) {
      std::string token;
      if (!std::getline(row, token, ','))
        throw std::runtime_error(label + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(n_fields) + " fields");
      try {
        std::size_t used = 0;
        fields[f] = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw std::runtime_error(label + ":" + std::to_string(line_no) +
                                 ": malformed number '" + token + "'");
      }
    }
    std::string extra;
    if (std::getline(row, extra))
      throw std::runtime_error(label + ":" + std::to_string(line_no) +
                               ": more than " + std::to_string(n_fields) + " fields");
    curve.amplitude.push_back(fields[0]);
    curve.p_err_standard.push_back(fields[1]);
    curve.p_err_generalized.push_back(fields[2]);
    if (with_sd) {
      curve.sd_standard.push_back(fields[3]);
      curve.sd_generalized.push_back(fields[4]);
    }
  }
  return curve;
}

ErrorCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file: " + path);
  return read_curve_csv(in, path);
}

}  // namespace roadloc
