// Grayscale image handling: PGM input/output, focal-plane sampling, and
// rectification of a camera image into per-cell road amplitudes.
//
// An image spans the full focal-plane rectangle
// [-sensor_half_width, +sensor_half_width] x [-half_height, +half_height].
// Column 0 is the left edge (x_t = -half_width); row 0 is the top edge,
// which by the projection convention is the side toward the horizon
// (largest y_t). Pixel (r, c) is centered at
//
//   x_t = (c + 0.5) / width  * 2*half_width  - half_width
//   y_t = half_height - (r + 0.5) / height * 2*half_height

#ifndef ROADLOC_IMAGING_HPP
#define ROADLOC_IMAGING_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "roadloc/camera_geometry.hpp"
#include "roadloc/sensing.hpp"

namespace roadloc {

/// Row-major grayscale raster, intensities normalized to [0, 1].
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  double at(std::size_t row, std::size_t col) const;
  double& at(std::size_t row, std::size_t col);
};

/// Reads P2 (ASCII) or P5 (binary) PGM, any maxval up to 65535,
/// '#' comments allowed in the header. Intensities are scaled by maxval.
/// Malformed input throws std::runtime_error naming the file and issue.
GrayImage read_pgm(const std::string& path);

/// Writes binary (P5) or ASCII (P2) PGM with the given maxval; intensities
/// are clamped to [0, 1] and rounded to the nearest level.
void write_pgm(const GrayImage& img, const std::string& path, int maxval = 255,
               bool binary = true);

/// Bilinear intensity at a focal-plane point; sample coordinates are
/// clamped to the pixel-center lattice, so points at the image border
/// read the border pixels.
double bilinear_sample(const GrayImage& img, double x_t, double y_t,
                       const CameraConfig& cfg);

/// Averages samples_per_cell^2 bilinear reads over each cell, sample
/// points on a uniform road-frame grid inset half a step from the cell
/// edges. Every cell must project inside the focal-plane rectangle;
/// a violating cell throws std::domain_error naming its index. Returned
/// values are raw mean intensities in [0, 1]; variances come from the
/// cell geometry as in sensing.
Observation rectify_to_cells(const GrayImage& img, const CameraConfig& cfg,
                             const std::vector<RoadRegion>& cells,
                             std::size_t samples_per_cell);

/// Undoes the rendering convention pixel = 0.5 + 0.5 * amplitude/scale:
/// returns a copy with values (v - 0.5) * 2 * scale.
Observation map_pixels_to_amplitudes(Observation obs, double scale);

/// Subtracts the global mean of the values, centering the observation
/// around zero.
Observation zero_center(Observation obs);

}  // namespace roadloc

#endif  // ROADLOC_IMAGING_HPP
