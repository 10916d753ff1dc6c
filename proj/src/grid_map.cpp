#include "roadloc/grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "roadloc/rng.hpp"

namespace roadloc {

namespace {

[[noreturn]] void parse_fail(const std::string& label, std::size_t line,
                             const std::string& msg) {
  throw std::runtime_error(label + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

double GridMap::at(std::size_t row, std::size_t col) const {
  if (row >= rows || col >= cols)
    throw std::out_of_range("GridMap::at: index (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside " + std::to_string(rows) +
                            "x" + std::to_string(cols) + " map");
  return cells[row * cols + col];
}

double& GridMap::at(std::size_t row, std::size_t col) {
  if (row >= rows || col >= cols)
    throw std::out_of_range("GridMap::at: index (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside " + std::to_string(rows) +
                            "x" + std::to_string(cols) + " map");
  return cells[row * cols + col];
}

void GridMap::validate() const {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("GridMap: dimensions must be positive");
  if (cells.size() != rows * cols)
    throw std::invalid_argument("GridMap: cell count " + std::to_string(cells.size()) +
                                " does not match " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  if (!(cell_side_cm > 0.0))
    throw std::invalid_argument("GridMap: cell_side_cm must be positive");
  if (!std::isfinite(origin_forward_cm) || !std::isfinite(origin_lateral_cm))
    throw std::invalid_argument("GridMap: origin must be finite");
  for (double v : cells)
    if (!std::isfinite(v)) throw std::invalid_argument("GridMap: amplitudes must be finite");
}

AmplitudeVector extract_candidate(const GridMap& map, CellOffset offset,
                                  const CellGrid& grid) {
  map.validate();
  if (std::abs(map.cell_side_cm - grid.cell_side_cm) >
      1e-9 * std::max(map.cell_side_cm, grid.cell_side_cm))
    throw std::invalid_argument("extract_candidate: map cell side " +
                                std::to_string(map.cell_side_cm) +
                                " does not match grid cell side " +
                                std::to_string(grid.cell_side_cm));

  AmplitudeVector out;
  out.values.reserve(grid.size());
  out.cell_refs = grid.cells;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const long row = grid.index[k].row + offset.row;
    const long col = grid.index[k].col + offset.col;
    if (row < 0 || col < 0 || row >= static_cast<long>(map.rows) ||
        col >= static_cast<long>(map.cols))
      throw std::out_of_range(
          "extract_candidate: cell " + std::to_string(k) + " (tesselation row " +
          std::to_string(grid.index[k].row) + ", col " +
          std::to_string(grid.index[k].col) + ") shifted by (" +
          std::to_string(offset.row) + ", " + std::to_string(offset.col) +
          ") leaves the " + std::to_string(map.rows) + "x" + std::to_string(map.cols) +
          " map");
    out.values.push_back(map.cells[static_cast<std::size_t>(row) * map.cols +
                                   static_cast<std::size_t>(col)]);
  }
  return out;
}

std::vector<CellOffset> feasible_offsets(const GridMap& map, const CellGrid& grid) {
  if (grid.size() == 0) return {};
  long row_min = grid.index[0].row, row_max = grid.index[0].row;
  long col_min = grid.index[0].col, col_max = grid.index[0].col;
  for (const auto& ix : grid.index) {
    row_min = std::min(row_min, ix.row);
    row_max = std::max(row_max, ix.row);
    col_min = std::min(col_min, ix.col);
    col_max = std::max(col_max, ix.col);
  }
  std::vector<CellOffset> out;
  const long dr_lo = -row_min, dr_hi = static_cast<long>(map.rows) - 1 - row_max;
  const long dc_lo = -col_min, dc_hi = static_cast<long>(map.cols) - 1 - col_max;
  for (long dr = dr_lo; dr <= dr_hi; ++dr)
    for (long dc = dc_lo; dc <= dc_hi; ++dc) out.push_back({dr, dc});
  return out;
}

GridMap random_map(std::size_t rows, std::size_t cols, double amplitude,
                   std::uint64_t seed, double cell_side_cm, double origin_forward_cm,
                   double origin_lateral_cm) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("random_map: dimensions must be positive");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("random_map: amplitude must be positive and finite");
  GridMap map;
  map.rows = rows;
  map.cols = cols;
  map.cell_side_cm = cell_side_cm;
  map.origin_forward_cm = origin_forward_cm;
  map.origin_lateral_cm = origin_lateral_cm;
  map.cells.resize(rows * cols);
  Xoshiro256pp rng(seed);
  for (auto& cell : map.cells) cell = rng.sign_bit() ? amplitude : -amplitude;
  map.validate();
  return map;
}

GridMap read_map_stream(std::istream& in, const std::string& label) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) parse_fail(label, 1, "empty input, expected header");
  ++line_no;
  std::istringstream header(line);
  long rows = 0, cols = 0;
  GridMap map;
  if (!(header >> rows >> cols >> map.cell_side_cm >> map.origin_forward_cm >>
        map.origin_lateral_cm))
    parse_fail(label, line_no,
               "malformed header, expected: rows cols cell_side_cm "
               "origin_forward_cm origin_lateral_cm");
  std::string extra;
  if (header >> extra) parse_fail(label, line_no, "trailing token '" + extra + "' in header");
  if (rows <= 0 || cols <= 0) parse_fail(label, line_no, "dimensions must be positive");

  map.rows = static_cast<std::size_t>(rows);
  map.cols = static_cast<std::size_t>(cols);
  map.cells.reserve(map.rows * map.cols);

  for (long r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      parse_fail(label, line_no + 1,
                 "unexpected end of file, expected row " + std::to_string(r));
    ++line_no;
    std::istringstream row_stream(line);
    for (long c = 0; c < cols; ++c) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (!(row_stream >> v))
        parse_fail(label, line_no,
                   "row " + std::to_string(r) + " has fewer than " +
                       std::to_string(cols) + " values");
      if (!std::isfinite(v))
        parse_fail(label, line_no, "non-finite amplitude in row " + std::to_string(r));
      map.cells.push_back(v);
    }
    if (row_stream >> extra)
      parse_fail(label, line_no, "row " + std::to_string(r) + " has more than " +
                                     std::to_string(cols) + " values");
  }
  map.validate();
  return map;
}

GridMap read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  return read_map_stream(in, path);
}

void write_map_stream(const GridMap& map, std::ostream& out) {
  map.validate();
  char buf[64];
  out << map.rows << ' ' << map.cols;
  std::snprintf(buf, sizeof buf, " %.9g %.9g %.9g", map.cell_side_cm,
                map.origin_forward_cm, map.origin_lateral_cm);
  out << buf << '\n';
  for (std::size_t r = 0; r < map.rows; ++r) {
    for (std::size_t c = 0; c < map.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.9g", map.cells[r * map.cols + c]);
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
}

void write_map_file(const GridMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open map file for writing: " + path);
  write_map_stream(map, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for map file: " + path);
}

}  // namespace roadloc
