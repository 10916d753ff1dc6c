#include "roadloc/sensing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "roadloc/rng.hpp"

namespace roadloc {

double cell_noise_variance(const RoadRegion& cell, const CameraConfig& cfg) {
  const double area = footprint_area(cell, cfg);
  if (area == 0.0)
    throw std::domain_error("cell_noise_variance: degenerate cell has zero footprint");
  return cfg.noise_density / area;
}

double cell_snr(double amplitude, const RoadRegion& cell, const CameraConfig& cfg) {
  if (!std::isfinite(amplitude))
    throw std::invalid_argument("cell_snr: amplitude must be finite");
  const double area = footprint_area(cell, cfg);
  if (area == 0.0)
    throw std::domain_error("cell_snr: degenerate cell has zero footprint");
  return amplitude * amplitude * area / cfg.noise_density;
}

Observation synthesize_observation(const AmplitudeVector& truth,
                                   const CameraConfig& cfg, std::uint64_t seed) {
  if (truth.values.size() != truth.cell_refs.size())
    throw std::invalid_argument(
        "synthesize_observation: amplitude/cell lists differ in length");

  std::string degenerate;
  for (std::size_t k = 0; k < truth.cell_refs.size(); ++k)
    if (footprint_area(truth.cell_refs[k], cfg) == 0.0)
      degenerate += (degenerate.empty() ? "" : ", ") + std::to_string(k);
  if (!degenerate.empty())
    throw std::invalid_argument(
        "synthesize_observation: degenerate cells with zero footprint: " + degenerate);

  Observation obs;
  obs.cell_refs = truth.cell_refs;
  obs.variances.reserve(truth.size());
  for (const auto& cell : truth.cell_refs)
    obs.variances.push_back(cell_noise_variance(cell, cfg));

  obs.values.resize(truth.size());
  Xoshiro256pp rng(seed);
  fill_gaussian(rng, obs.values);
  for (std::size_t k = 0; k < obs.values.size(); ++k)
    obs.values[k] = truth.values[k] + obs.values[k] * std::sqrt(obs.variances[k]);
  return obs;
}

}  // namespace roadloc
