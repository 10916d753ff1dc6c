// Pinhole projection of a flat road onto the focal plane, and the cell
// bookkeeping built on top of it.
//
// Coordinate conventions (all lengths in cm, angles in radians):
//
//   Camera frame: origin at the optical center, z along the optical axis
//   (tilted down by `pitch_rad` from the horizontal), x to the right,
//   y completing the right-handed frame. A road point at depth z and
//   lateral position x projects to focal-plane coordinates
//
//     x_t = f * x / z
//     y_t = f * tan(pitch) - (f * h / z) * sec(pitch)
//
//   where h is the camera height above the road. The road plane itself is
//   y = z * tan(pitch) - h * sec(pitch); points on it satisfy the above.
//   y_t increases toward the horizon row y_t = f * tan(pitch), which is
//   approached as z -> infinity and never reached by a road point.
//
//   Ground frame: distances measured along the road from the point under
//   the camera. Forward distance d relates to camera depth by
//
//     z = d * cos(pitch) + h * sin(pitch)
//
//   The road tesselation lives in the ground frame: square cells of side
//   `cell_side_cm`, row j spanning forward distances [j*side, (j+1)*side),
//   column i spanning lateral [offset + i*side, offset + (i+1)*side).
//
//   Visibility of a cell is the frustum test applied to its four corners:
//   elevation |y_c / z_c| <= tan(vfov/2) and azimuth |x| <= tan(hfov/2) *
//   sqrt(d^2 + h^2), with a small relative tolerance so corners engineered
//   to lie exactly on the frustum boundary count as inside.

#ifndef ROADLOC_CAMERA_GEOMETRY_HPP
#define ROADLOC_CAMERA_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace roadloc {

/// Camera intrinsics and mounting pose. Validation throws
/// std::invalid_argument naming the offending field.
struct CameraConfig {
  double focal_length_cm = 0.0367;
  double height_cm = 58.3095;
  double pitch_rad = 0.0;  ///< optical axis depression below horizontal
  double vfov_rad = 0.0;
  double hfov_rad = 0.0;
  double noise_density = 0.0018;  ///< noise energy per unit focal-plane area

  /// Focal-plane half extents: f * tan(fov/2) per axis.
  double sensor_half_width() const;
  double sensor_half_height() const;

  /// Checks positivity, angle ranges, and that the upper frustum ray stays
  /// below the horizon (pitch > vfov/2) so visible road depth is finite.
  void validate() const;
};

/// Point on the road plane, camera frame (lateral, depth).
struct RoadPoint {
  double x_cm = 0.0;
  double z_cm = 0.0;
};

/// Point on the focal plane.
struct FocalPoint {
  double x_t = 0.0;
  double y_t = 0.0;
};

/// Axis-aligned road rectangle in camera-frame coordinates,
/// x in [x_l, x_u], depth in [z_l, z_u].
struct RoadRegion {
  double x_l = 0.0;
  double x_u = 0.0;
  double z_l = 0.0;
  double z_u = 0.0;
};

/// Integer tesselation coordinates of a cell: row counts cell sides of
/// forward distance from the camera base, col counts cell sides laterally
/// from the grid anchor line. Either may be negative.
struct CellIndex {
  long row = 0;
  long col = 0;
};

/// Visible cells plus the tesselation parameters that generated them.
/// `cells` and `index` are parallel, ordered near-to-far then
/// left-to-right within a row.
struct CellGrid {
  double cell_side_cm = 0.0;
  double lateral_offset_cm = 0.0;
  std::vector<RoadRegion> cells;
  std::vector<CellIndex> index;

  std::size_t size() const { return cells.size(); }
};

/// Road point -> focal plane. Throws std::domain_error for z <= 0.
FocalPoint project_point(const RoadPoint& p, const CameraConfig& cfg);

/// Focal plane -> road point, inverting project_point:
/// z = f*h / (f*sin(pitch) - y_t*cos(pitch)). Throws std::domain_error
/// when y_t is at or above the horizon row (no road preimage).
RoadPoint backproject(const FocalPoint& q, const CameraConfig& cfg);

/// Determinant of the road->focal Jacobian at depth z, the signed local
/// area scale: -f^2 * h * sec(pitch) / z^3. Negative because the mapping
/// flips orientation; |jacobian_det| is the area magnification.
/// Throws std::domain_error for z <= 0.
double jacobian_det(double z_cm, const CameraConfig& cfg);

/// Exact focal-plane area of the image of `r`:
///   f^2 * h * sec(pitch) * (x_u - x_l) / 2 * (1/z_l^2 - 1/z_u^2).
/// Equals the integral of |jacobian_det| over the region. Degenerate
/// regions (zero width or depth) return 0 so map-edge slivers can be
/// filtered by callers. Throws std::invalid_argument for out-of-order
/// bounds, std::domain_error for z_l <= 0.
double footprint_area(const RoadRegion& r, const CameraConfig& cfg);

/// Forward ground distance -> camera depth along the road plane.
double ground_to_depth(double ground_cm, const CameraConfig& cfg);

/// Camera depth -> forward ground distance. Throws std::domain_error
/// for z <= 0.
double depth_to_ground(double z_cm, const CameraConfig& cfg);

/// Enumerates the whole tesselation cells visible in the frustum,
/// near-to-far then left-to-right. Grid lines sit at forward distances
/// j*side and lateral positions lateral_offset_cm + i*side. Cell regions
/// carry camera-frame depths (ground_to_depth of the row edges).
/// Throws on invalid cfg or cell_side_cm <= 0.
CellGrid visible_cell_grid(const CameraConfig& cfg, double cell_side_cm,
                           double lateral_offset_cm);

/// Convenience wrapper returning only the regions.
std::vector<RoadRegion> visible_whole_cells(const CameraConfig& cfg,
                                            double cell_side_cm,
                                            double lateral_offset_cm);

}  // namespace roadloc

#endif  // ROADLOC_CAMERA_GEOMETRY_HPP
