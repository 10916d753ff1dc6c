// Per-cell observation statistics. A cell whose focal-plane footprint has
// area A is read with additive zero-mean Gaussian noise of variance
// noise_density / A: small, close-up footprints average over more of the
// focal plane and are read more reliably than distant slivers.

#ifndef ROADLOC_SENSING_HPP
#define ROADLOC_SENSING_HPP

#include <cstdint>
#include <vector>

#include "roadloc/camera_geometry.hpp"
#include "roadloc/grid_map.hpp"

namespace roadloc {

/// Noisy per-cell reading, parallel to the cells it was taken from.
struct Observation {
  std::vector<double> values;
  std::vector<RoadRegion> cell_refs;
  std::vector<double> variances;

  std::size_t size() const { return values.size(); }
};

/// Noise variance of one cell: noise_density / footprint_area(cell).
double cell_noise_variance(const RoadRegion& cell, const CameraConfig& cfg);

/// Per-cell signal-to-noise ratio: amplitude^2 * footprint_area / noise_density.
/// Throws std::invalid_argument for non-finite amplitude.
double cell_snr(double amplitude, const RoadRegion& cell, const CameraConfig& cfg);

/// Adds independent Gaussian noise to a true amplitude vector. Deviates
/// come from one xoshiro256++ stream seeded with `seed`, Box-Muller pairs
/// consumed in cell order (see rng.hpp).
Observation synthesize_observation(const AmplitudeVector& truth,
                                   const CameraConfig& cfg, std::uint64_t seed);

}  // namespace roadloc

#endif  // ROADLOC_SENSING_HPP
