#include "roadloc/camera_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roadloc {

namespace {

// Relative slack on the frustum boundary tests. Grid layouts are often
// designed so cell corners land exactly on the frustum edge; without
// slack those cells would flicker in and out with rounding.
constexpr double kFrustumTolerance = 1e-4;

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("CameraConfig: " + msg);
}

}  // namespace

double CameraConfig::sensor_half_width() const {
  return focal_length_cm * std::tan(hfov_rad / 2.0);
}

double CameraConfig::sensor_half_height() const {
  return focal_length_cm * std::tan(vfov_rad / 2.0);
}

void CameraConfig::validate() const {
  require(std::isfinite(focal_length_cm) && focal_length_cm > 0.0,
          "focal_length_cm must be positive");
  require(std::isfinite(height_cm) && height_cm > 0.0, "height_cm must be positive");
  require(std::isfinite(noise_density) && noise_density > 0.0,
          "noise_density must be positive");
  require(std::isfinite(pitch_rad) && pitch_rad > 0.0 && pitch_rad < kPi / 2.0,
          "pitch_rad must lie in (0, pi/2)");
  require(std::isfinite(vfov_rad) && vfov_rad > 0.0 && vfov_rad < kPi,
          "vfov_rad must lie in (0, pi)");
  require(std::isfinite(hfov_rad) && hfov_rad > 0.0 && hfov_rad < kPi,
          "hfov_rad must lie in (0, pi)");
  require(pitch_rad - vfov_rad / 2.0 > 0.0,
          "upper frustum ray must stay below the horizon (pitch_rad > vfov_rad/2)");
}

FocalPoint project_point(const RoadPoint& p, const CameraConfig& cfg) {
  if (!(p.z_cm > 0.0))
    throw std::domain_error("project_point: depth must be positive, got " +
                            std::to_string(p.z_cm));
  const double f = cfg.focal_length_cm;
  const double sec = 1.0 / std::cos(cfg.pitch_rad);
  return {f * p.x_cm / p.z_cm,
          f * std::tan(cfg.pitch_rad) - (f * cfg.height_cm / p.z_cm) * sec};
}

RoadPoint backproject(const FocalPoint& q, const CameraConfig& cfg) {
  const double f = cfg.focal_length_cm;
  const double s = std::sin(cfg.pitch_rad);
  const double c = std::cos(cfg.pitch_rad);
  const double denom = f * s - q.y_t * c;
  if (!(denom > 0.0))
    throw std::domain_error(
        "backproject: y_t at or above the horizon row, no road preimage");
  const double z = f * cfg.height_cm / denom;
  return {q.x_t * z / f, z};
}

double jacobian_det(double z_cm, const CameraConfig& cfg) {
  if (!(z_cm > 0.0))
    throw std::domain_error("jacobian_det: depth must be positive, got " +
                            std::to_string(z_cm));
  const double f = cfg.focal_length_cm;
  const double sec = 1.0 / std::cos(cfg.pitch_rad);
  return -f * f * cfg.height_cm * sec / (z_cm * z_cm * z_cm);
}

double footprint_area(const RoadRegion& r, const CameraConfig& cfg) {
  if (r.x_u < r.x_l || r.z_u < r.z_l)
    throw std::invalid_argument("footprint_area: region bounds out of order");
  if (!(r.z_l > 0.0))
    throw std::domain_error("footprint_area: region depth must be positive");
  if (r.x_u == r.x_l || r.z_u == r.z_l) return 0.0;  // degenerate sliver
  const double f = cfg.focal_length_cm;
  const double sec = 1.0 / std::cos(cfg.pitch_rad);
  const double width = r.x_u - r.x_l;
  const double depth_term = 1.0 / (r.z_l * r.z_l) - 1.0 / (r.z_u * r.z_u);
  return f * f * cfg.height_cm * sec * width / 2.0 * depth_term;
}

double ground_to_depth(double ground_cm, const CameraConfig& cfg) {
  return ground_cm * std::cos(cfg.pitch_rad) + cfg.height_cm * std::sin(cfg.pitch_rad);
}

double depth_to_ground(double z_cm, const CameraConfig& cfg) {
  if (!(z_cm > 0.0))
    throw std::domain_error("depth_to_ground: depth must be positive");
  return (z_cm - cfg.height_cm * std::sin(cfg.pitch_rad)) / std::cos(cfg.pitch_rad);
}

namespace {

// Frustum test for a ground-frame corner (lateral x, forward d).
// Elevation compares the camera-frame ray slope against tan(vfov/2);
// azimuth compares lateral displacement against the half-width of the
// frustum at that range.
bool corner_visible(double x, double d, double sin_p, double cos_p, double h,
                    double tan_v, double tan_h) {
  const double z_c = d * cos_p + h * sin_p;
  if (!(z_c > 0.0)) return false;
  const double y_c = d * sin_p - h * cos_p;
  if (std::abs(y_c) > tan_v * z_c * (1.0 + kFrustumTolerance)) return false;
  const double range = std::sqrt(d * d + h * h);
  return std::abs(x) <= tan_h * range * (1.0 + kFrustumTolerance);
}

}  // namespace

CellGrid visible_cell_grid(const CameraConfig& cfg, double cell_side_cm,
                           double lateral_offset_cm) {
  cfg.validate();
  if (!(cell_side_cm > 0.0))
    throw std::invalid_argument("visible_cell_grid: cell_side_cm must be positive");
  if (!std::isfinite(lateral_offset_cm))
    throw std::invalid_argument("visible_cell_grid: lateral_offset_cm must be finite");

  const double sin_p = std::sin(cfg.pitch_rad);
  const double cos_p = std::cos(cfg.pitch_rad);
  const double h = cfg.height_cm;
  const double tan_v = std::tan(cfg.vfov_rad / 2.0);
  const double tan_h = std::tan(cfg.hfov_rad / 2.0);

  // Forward extent of the visible road strip: where the lower and upper
  // frustum rays meet the ground. pitch > vfov/2 keeps d_far finite.
  const double d_near = h * (cos_p - tan_v * sin_p) / (sin_p + tan_v * cos_p);
  const double d_far = h * (cos_p + tan_v * sin_p) / (sin_p - tan_v * cos_p);

  const long row_lo = std::max(0L, static_cast<long>(std::floor(d_near / cell_side_cm)) - 1);
  const long row_hi = static_cast<long>(std::ceil(d_far / cell_side_cm)) + 1;

  CellGrid grid;
  grid.cell_side_cm = cell_side_cm;
  grid.lateral_offset_cm = lateral_offset_cm;

  for (long row = row_lo; row <= row_hi; ++row) {
    const double d_l = static_cast<double>(row) * cell_side_cm;
    const double d_u = d_l + cell_side_cm;

    // Widest possible lateral reach at this row, with a one-cell guard band.
    const double x_bound =
        tan_h * std::sqrt(d_u * d_u + h * h) * (1.0 + kFrustumTolerance);
    const long col_lo =
        static_cast<long>(std::floor((-x_bound - lateral_offset_cm) / cell_side_cm)) - 1;
    const long col_hi =
        static_cast<long>(std::ceil((x_bound - lateral_offset_cm) / cell_side_cm)) + 1;

    for (long col = col_lo; col <= col_hi; ++col) {
      const double x_l = lateral_offset_cm + static_cast<double>(col) * cell_side_cm;
      const double x_u = x_l + cell_side_cm;
      const bool visible = corner_visible(x_l, d_l, sin_p, cos_p, h, tan_v, tan_h) &&
                           corner_visible(x_u, d_l, sin_p, cos_p, h, tan_v, tan_h) &&
                           corner_visible(x_l, d_u, sin_p, cos_p, h, tan_v, tan_h) &&
                           corner_visible(x_u, d_u, sin_p, cos_p, h, tan_v, tan_h);
      if (!visible) continue;
      grid.cells.push_back({x_l, x_u, ground_to_depth(d_l, cfg), ground_to_depth(d_u, cfg)});
      grid.index.push_back({row, col});
    }
  }
  return grid;
}

std::vector<RoadRegion> visible_whole_cells(const CameraConfig& cfg,
                                            double cell_side_cm,
                                            double lateral_offset_cm) {
  return visible_cell_grid(cfg, cell_side_cm, lateral_offset_cm).cells;
}

}  // namespace roadloc
