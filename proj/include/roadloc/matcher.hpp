// Candidate matching on the focal plane.
//
// Because cell noise variance is noise_density / footprint_area, the
// maximum-likelihood candidate minimizes a weighted squared distance
//
//   ||v - u||_G^2 = sum_k g_k (v_k - u_k)^2,
//   g_k = footprint_area_k / (f^2 * h * sec(pitch)) = (x_u - x_l)/2 * (1/z_l^2 - 1/z_u^2)
//
// i.e. the Gram matrix of the cell footprints, diagonal here because whole
// cells do not overlap on the focal plane. A plain Euclidean matcher
// (all-ones weights) is provided as the baseline it is compared against.
//
// For two candidates u_star (true) and u_hat, the probability that noise
// makes the matcher prefer u_hat has closed form 1 - Phi(arg) with
//
//   weighted:   arg = sqrt(f^2 h sec(pitch) / noise_density)
//                     * <u_star - u_hat | u_star>_G / ||u_star - u_hat||_G
//   unweighted: arg = sqrt(f^2 h sec(pitch) / noise_density)
//                     * <u_star - u_hat | u_star> / ||u_star - u_hat||_{G^-1}
//
// where <.|.> without a subscript is the standard inner product and
// ||d||_{G^-1}^2 = sum_k d_k^2 / g_k. The weighted argument is never
// smaller (Cauchy-Schwarz), so the weighted matcher is never worse.

#ifndef ROADLOC_MATCHER_HPP
#define ROADLOC_MATCHER_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "roadloc/camera_geometry.hpp"
#include "roadloc/grid_map.hpp"
#include "roadloc/sensing.hpp"

namespace roadloc {

/// Diagonal Gram weights, parallel to the cells they describe.
struct WeightVector {
  std::vector<double> g;
  std::vector<RoadRegion> cell_refs;

  std::size_t size() const { return g.size(); }
};

/// Winning candidate plus per-candidate scores (squared distances in the
/// matcher's metric). `tie` flags a runner-up within relative 1e-12 of
/// the best score; the lowest index still wins.
struct MatchResult {
  std::size_t best_index = 0;
  std::vector<double> scores;
  bool tie = false;
};

/// g_k for each cell. Throws on invalid cfg or empty cell list.
WeightVector gramian_weights(const std::vector<RoadRegion>& cells,
                             const CameraConfig& cfg);

/// sum_k g_k a_k b_k. Lengths must agree.
double weighted_inner(std::span<const double> a, std::span<const double> b,
                      const WeightVector& weights);

/// sqrt(<a|a>_G).
double weighted_norm(std::span<const double> a, const WeightVector& weights);

/// Maximum-likelihood match: minimizes ||v - u||_G^2 over candidates.
/// Throws std::invalid_argument on an empty candidate list or length
/// mismatch with the observation.
MatchResult ml_classify(const Observation& obs,
                        const std::vector<AmplitudeVector>& candidates,
                        const WeightVector& weights);

/// Baseline match: minimizes the unweighted squared distance.
MatchResult euclid_classify(const Observation& obs,
                            const std::vector<AmplitudeVector>& candidates);

/// Standard normal CDF, absolute error below 1e-12 over the full range.
double std_normal_cdf(double x);

/// sqrt(f^2 * h * sec(pitch) / noise_density): converts a unit-weight
/// distance on the road grid into a noise-normalized deviate.
double snr_prefactor(const CameraConfig& cfg);

/// Phi arguments of the two pairwise error expressions above, on raw
/// spans with precomputed weights. Throws std::invalid_argument when the
/// candidates coincide (the error event is ill-defined).
double weighted_error_argument(std::span<const double> u_star,
                               std::span<const double> u_hat,
                               std::span<const double> g, double prefactor);
double unweighted_error_argument(std::span<const double> u_star,
                                 std::span<const double> u_hat,
                                 std::span<const double> g, double prefactor);

/// Probability that noise makes the matcher prefer u_hat over the true
/// u_star, for each matcher: 1 - Phi(argument).
double pairwise_error_weighted(const AmplitudeVector& u_star,
                               const AmplitudeVector& u_hat,
                               const WeightVector& weights,
                               const CameraConfig& cfg);
double pairwise_error_unweighted(const AmplitudeVector& u_star,
                                 const AmplitudeVector& u_hat,
                                 const WeightVector& weights,
                                 const CameraConfig& cfg);

}  // namespace roadloc

#endif  // ROADLOC_MATCHER_HPP
