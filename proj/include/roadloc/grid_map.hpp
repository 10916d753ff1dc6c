// Reference amplitude maps: a rectangular array of per-cell road
// amplitudes aligned with the camera tesselation, plus candidate
// extraction for localization.
//
// Map indices are tesselation indices. A camera cell with tesselation
// coordinates (row, col) shifted by a candidate offset (dr, dc) reads
// map entry (row + dr, col + dc). The origin fields on the map record
// where cell (0,0) sits physically; they are metadata for rendering and
// file round trips and do not enter the index arithmetic.

#ifndef ROADLOC_GRID_MAP_HPP
#define ROADLOC_GRID_MAP_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roadloc/camera_geometry.hpp"

namespace roadloc {

struct GridMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double cell_side_cm = 0.0;
  double origin_forward_cm = 0.0;  ///< near edge of row 0, ground frame
  double origin_lateral_cm = 0.0;  ///< left edge of column 0
  std::vector<double> cells;       ///< row-major, rows*cols amplitudes

  double at(std::size_t row, std::size_t col) const;
  double& at(std::size_t row, std::size_t col);

  /// Shape, side, and finiteness checks; throws std::invalid_argument.
  void validate() const;
};

/// Amplitudes of the visible cells, parallel to the regions they
/// were read from, in enumeration order.
struct AmplitudeVector {
  std::vector<double> values;
  std::vector<RoadRegion> cell_refs;

  std::size_t size() const { return values.size(); }
};

/// Candidate placement: tesselation index -> map index shift.
struct CellOffset {
  long row = 0;
  long col = 0;
};

/// Reads the map amplitude under every visible cell at the given offset.
/// Throws std::out_of_range (naming the first offending cell) when any
/// shifted index leaves the map, std::invalid_argument when the map and
/// grid cell sides disagree.
AmplitudeVector extract_candidate(const GridMap& map, CellOffset offset,
                                  const CellGrid& grid);

/// All offsets that keep every visible cell inside the map, row-major
/// (row ascending, then col). Empty when the map is too small.
std::vector<CellOffset> feasible_offsets(const GridMap& map, const CellGrid& grid);

/// Map with i.i.d. equiprobable +/-amplitude cells. Sign of cell (r,c) is
/// one fair bit of a xoshiro256++ stream seeded with `seed`, consumed in
/// row-major order. Geometry fields are filled from the arguments.
GridMap random_map(std::size_t rows, std::size_t cols, double amplitude,
                   std::uint64_t seed, double cell_side_cm = 20.0,
                   double origin_forward_cm = 0.0, double origin_lateral_cm = 0.0);

/// Text format, round-trip safe at 9 significant digits:
///   line 1: rows cols cell_side_cm origin_forward_cm origin_lateral_cm
///   then one line per row (nearest row first), cols amplitudes each.
/// Parse errors throw std::runtime_error with the line number.
GridMap read_map_file(const std::string& path);
GridMap read_map_stream(std::istream& in, const std::string& label);
void write_map_file(const GridMap& map, const std::string& path);
void write_map_stream(const GridMap& map, std::ostream& out);

}  // namespace roadloc

#endif  // ROADLOC_GRID_MAP_HPP
