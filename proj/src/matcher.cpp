#include "roadloc/matcher.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roadloc {

namespace {

constexpr double kTieRelTolerance = 1e-12;

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": length mismatch, " +
                                std::to_string(a) + " vs " + std::to_string(b));
}

MatchResult pick_best(std::vector<double> scores) {
  MatchResult result;
  result.scores = std::move(scores);
  for (std::size_t j = 1; j < result.scores.size(); ++j)
    if (result.scores[j] < result.scores[result.best_index]) result.best_index = j;
  const double best = result.scores[result.best_index];
  for (std::size_t j = 0; j < result.scores.size(); ++j) {
    if (j == result.best_index) continue;
    const double diff = result.scores[j] - best;
    if (diff <= kTieRelTolerance * std::max(std::abs(best), std::abs(result.scores[j]))) {
      result.tie = true;
      break;
    }
  }
  return result;
}

}  // namespace

WeightVector gramian_weights(const std::vector<RoadRegion>& cells,
                             const CameraConfig& cfg) {
  cfg.validate();
  if (cells.empty())
    throw std::invalid_argument("gramian_weights: empty cell list");
  WeightVector w;
  w.cell_refs = cells;
  w.g.reserve(cells.size());
  for (const auto& cell : cells) {
    if (!(cell.x_u > cell.x_l) || !(cell.z_u > cell.z_l) || !(cell.z_l > 0.0))
      throw std::invalid_argument("gramian_weights: degenerate cell region");
    const double depth_term = 1.0 / (cell.z_l * cell.z_l) - 1.0 / (cell.z_u * cell.z_u);
    w.g.push_back((cell.x_u - cell.x_l) / 2.0 * depth_term);
  }
  return w;
}

double weighted_inner(std::span<const double> a, std::span<const double> b,
                      const WeightVector& weights) {
  check_lengths(a.size(), b.size(), "weighted_inner");
  check_lengths(a.size(), weights.size(), "weighted_inner (weights)");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += weights.g[k] * a[k] * b[k];
  return sum;
}

double weighted_norm(std::span<const double> a, const WeightVector& weights) {
  return std::sqrt(weighted_inner(a, a, weights));
}

namespace {

MatchResult classify_impl(const Observation& obs,
                          const std::vector<AmplitudeVector>& candidates,
                          const double* g, const char* what) {
  if (candidates.empty())
    throw std::invalid_argument(std::string(what) + ": empty candidate list");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& cand : candidates) {
    check_lengths(cand.values.size(), obs.values.size(), what);
    double sum = 0.0;
    for (std::size_t k = 0; k < obs.values.size(); ++k) {
      const double diff = obs.values[k] - cand.values[k];
      sum += (g ? g[k] : 1.0) * diff * diff;
    }
    scores.push_back(sum);
  }
  return pick_best(std::move(scores));
}

}  // namespace

MatchResult ml_classify(const Observation& obs,
                        const std::vector<AmplitudeVector>& candidates,
                        const WeightVector& weights) {
  check_lengths(obs.values.size(), weights.size(), "ml_classify (weights)");
  return classify_impl(obs, candidates, weights.g.data(), "ml_classify");
}

MatchResult euclid_classify(const Observation& obs,
                            const std::vector<AmplitudeVector>& candidates) {
  return classify_impl(obs, candidates, nullptr, "euclid_classify");
}

double snr_prefactor(const CameraConfig& cfg) {
  cfg.validate();
  const double f = cfg.focal_length_cm;
  const double sec = 1.0 / std::cos(cfg.pitch_rad);
  return std::sqrt(f * f * cfg.height_cm * sec / cfg.noise_density);
}

namespace {

struct PairAccum {
  double num_weighted = 0.0;    // <u_star - u_hat | u_star>_G
  double den_weighted = 0.0;    // ||u_star - u_hat||_G^2
  double num_standard = 0.0;    // <u_star - u_hat | u_star>
  double den_standard = 0.0;    // sum diff^2 / g  (= ||diff||_{G^-1}^2)
};

PairAccum accumulate_pair(std::span<const double> u_star, std::span<const double> u_hat,
                          std::span<const double> g) {
  check_lengths(u_star.size(), u_hat.size(), "pairwise error");
  check_lengths(u_star.size(), g.size(), "pairwise error (weights)");
  PairAccum acc;
  for (std::size_t k = 0; k < u_star.size(); ++k) {
    const double diff = u_star[k] - u_hat[k];
    if (diff == 0.0) continue;
    acc.num_weighted += g[k] * diff * u_star[k];
    acc.den_weighted += g[k] * diff * diff;
    acc.num_standard += diff * u_star[k];
    acc.den_standard += diff * diff / g[k];
  }
  if (acc.den_weighted == 0.0)
    throw std::invalid_argument("pairwise error: candidates coincide");
  return acc;
}

}  // namespace

double weighted_error_argument(std::span<const double> u_star,
                               std::span<const double> u_hat,
                               std::span<const double> g, double prefactor) {
  const PairAccum acc = accumulate_pair(u_star, u_hat, g);
  return prefactor * acc.num_weighted / std::sqrt(acc.den_weighted);
}

double unweighted_error_argument(std::span<const double> u_star,
                                 std::span<const double> u_hat,
                                 std::span<const double> g, double prefactor) {
  const PairAccum acc = accumulate_pair(u_star, u_hat, g);
  return prefactor * acc.num_standard / std::sqrt(acc.den_standard);
}

double pairwise_error_weighted(const AmplitudeVector& u_star,
                               const AmplitudeVector& u_hat,
                               const WeightVector& weights, const CameraConfig& cfg) {
  return 1.0 - std_normal_cdf(weighted_error_argument(u_star.values, u_hat.values,
                                                      weights.g, snr_prefactor(cfg)));
}

double pairwise_error_unweighted(const AmplitudeVector& u_star,
                                 const AmplitudeVector& u_hat,
                                 const WeightVector& weights, const CameraConfig& cfg) {
  return 1.0 - std_normal_cdf(unweighted_error_argument(u_star.values, u_hat.values,
                                                        weights.g, snr_prefactor(cfg)));
}

}  // namespace roadloc
