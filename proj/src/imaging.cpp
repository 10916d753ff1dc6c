#include "roadloc/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace roadloc {

namespace {

[[noreturn]] void pgm_fail(const std::string& path, const std::string& msg) {
  throw std::runtime_error(path + ": " + msg);
}

// Next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

long parse_pgm_int(std::istream& in, const std::string& path, const char* what,
                   long min, long max) {
  const std::string tok = pgm_token(in);
  if (tok.empty()) pgm_fail(path, std::string("unexpected end of header, expected ") + what);
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size())
    pgm_fail(path, std::string("malformed ") + what + " '" + tok + "'");
  if (value < min || value > max)
    pgm_fail(path, std::string(what) + " " + tok + " out of range [" +
                       std::to_string(min) + ", " + std::to_string(max) + "]");
  return value;
}

}  // namespace

double GrayImage::at(std::size_t row, std::size_t col) const {
  if (row >= height || col >= width)
    throw std::out_of_range("GrayImage::at: pixel (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside " + std::to_string(width) +
                            "x" + std::to_string(height) + " image");
  return pixels[row * width + col];
}

double& GrayImage::at(std::size_t row, std::size_t col) {
  if (row >= height || col >= width)
    throw std::out_of_range("GrayImage::at: pixel (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside " + std::to_string(width) +
                            "x" + std::to_string(height) + " image");
  return pixels[row * width + col];
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) pgm_fail(path, "cannot open file");

  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5")
    pgm_fail(path, "unsupported magic '" + magic + "', expected P2 or P5");

  const long width = parse_pgm_int(in, path, "width", 1, 1 << 20);
  const long height = parse_pgm_int(in, path, "height", 1, 1 << 20);
  const long maxval = parse_pgm_int(in, path, "maxval", 1, 65535);

  GrayImage img;
  img.width = static_cast<std::size_t>(width);
  img.height = static_cast<std::size_t>(height);
  img.pixels.reserve(img.width * img.height);
  const double scale = 1.0 / static_cast<double>(maxval);
  const std::size_t count = img.width * img.height;

  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i)
      img.pixels.push_back(
          static_cast<double>(parse_pgm_int(in, path, "pixel", 0, maxval)) * scale);
  } else {
    // P5: header ends at exactly one whitespace byte, then raw samples,
    // two bytes big-endian when maxval > 255.
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * static_cast<std::size_t>(bytes));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
      pgm_fail(path, "truncated pixel data, expected " + std::to_string(raw.size()) +
                         " bytes, got " + std::to_string(in.gcount()));
    for (std::size_t i = 0; i < count; ++i) {
      long v = bytes == 1 ? raw[i]
                          : (static_cast<long>(raw[2 * i]) << 8) | raw[2 * i + 1];
      if (v > maxval)
        pgm_fail(path, "pixel value " + std::to_string(v) + " exceeds maxval " +
                           std::to_string(maxval));
      img.pixels.push_back(static_cast<double>(v) * scale);
    }
  }
  return img;
}

void write_pgm(const GrayImage& img, const std::string& path, int maxval, bool binary) {
  if (img.width == 0 || img.height == 0 || img.pixels.size() != img.width * img.height)
    throw std::invalid_argument("write_pgm: inconsistent image dimensions");
  if (maxval < 1 || maxval > 65535)
    throw std::invalid_argument("write_pgm: maxval out of range");

  std::ofstream out(path, std::ios::binary);
  if (!out) pgm_fail(path, "cannot open file for writing");
  out << (binary ? "P5" : "P2") << '\n'
      << img.width << ' ' << img.height << '\n'
      << maxval << '\n';

  const double scale = static_cast<double>(maxval);
  std::size_t col = 0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double clamped = std::clamp(img.pixels[i], 0.0, 1.0);
    const long v = std::lround(clamped * scale);
    if (binary) {
      if (maxval > 255) out.put(static_cast<char>((v >> 8) & 0xff));
      out.put(static_cast<char>(v & 0xff));
    } else {
      out << v << (++col % img.width == 0 ? '\n' : ' ');
    }
  }
  out.flush();
  if (!out) pgm_fail(path, "write failed");
}

double bilinear_sample(const GrayImage& img, double x_t, double y_t,
                       const CameraConfig& cfg) {
  const double half_w = cfg.sensor_half_width();
  const double half_h = cfg.sensor_half_height();
  const double u = (x_t + half_w) / (2.0 * half_w) * static_cast<double>(img.width) - 0.5;
  const double v = (half_h - y_t) / (2.0 * half_h) * static_cast<double>(img.height) - 0.5;

  const double uc = std::clamp(u, 0.0, static_cast<double>(img.width - 1));
  const double vc = std::clamp(v, 0.0, static_cast<double>(img.height - 1));
  const std::size_t c0 = static_cast<std::size_t>(uc);
  const std::size_t r0 = static_cast<std::size_t>(vc);
  const std::size_t c1 = std::min(c0 + 1, img.width - 1);
  const std::size_t r1 = std::min(r0 + 1, img.height - 1);
  const double fu = uc - static_cast<double>(c0);
  const double fv = vc - static_cast<double>(r0);

  const double top = img.pixels[r0 * img.width + c0] * (1.0 - fu) +
                     img.pixels[r0 * img.width + c1] * fu;
  const double bot = img.pixels[r1 * img.width + c0] * (1.0 - fu) +
                     img.pixels[r1 * img.width + c1] * fu;
  return top * (1.0 - fv) + bot * fv;
}

Observation rectify_to_cells(const GrayImage& img, const CameraConfig& cfg,
                             const std::vector<RoadRegion>& cells,
                             std::size_t samples_per_cell) {
  cfg.validate();
  if (img.width == 0 || img.height == 0 || img.pixels.size() != img.width * img.height)
    throw std::invalid_argument("rectify_to_cells: inconsistent image dimensions");
  if (samples_per_cell == 0)
    throw std::invalid_argument("rectify_to_cells: samples_per_cell must be positive");

  const double half_w = cfg.sensor_half_width();
  const double half_h = cfg.sensor_half_height();
  // Cell images are quadrilaterals (edges stay straight under the road
  // projection), so corner containment covers the whole footprint.
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const RoadRegion& cell = cells[k];
    for (const double x : {cell.x_l, cell.x_u})
      for (const double z : {cell.z_l, cell.z_u}) {
        const FocalPoint q = project_point({x, z}, cfg);
        if (std::abs(q.x_t) > half_w * (1.0 + 1e-12) ||
            std::abs(q.y_t) > half_h * (1.0 + 1e-12))
          throw std::domain_error(
              "rectify_to_cells: cell " + std::to_string(k) + " corner (x=" +
              std::to_string(x) + ", z=" + std::to_string(z) +
              ") projects outside the focal-plane rectangle");
      }
  }

  Observation obs;
  obs.cell_refs = cells;
  obs.values.reserve(cells.size());
  obs.variances.reserve(cells.size());
  const double n = static_cast<double>(samples_per_cell);
  for (const auto& cell : cells) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples_per_cell; ++i) {
      const double x =
          cell.x_l + (static_cast<double>(i) + 0.5) / n * (cell.x_u - cell.x_l);
      for (std::size_t j = 0; j < samples_per_cell; ++j) {
        const double z =
            cell.z_l + (static_cast<double>(j) + 0.5) / n * (cell.z_u - cell.z_l);
        const FocalPoint q = project_point({x, z}, cfg);
        sum += bilinear_sample(img, q.x_t, q.y_t, cfg);
      }
    }
    obs.values.push_back(sum / (n * n));
    obs.variances.push_back(cell_noise_variance(cell, cfg));
  }
  return obs;
}

Observation map_pixels_to_amplitudes(Observation obs, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("map_pixels_to_amplitudes: scale must be positive");
  for (auto& v : obs.values) v = (v - 0.5) * 2.0 * scale;
  return obs;
}

Observation zero_center(Observation obs) {
  if (obs.values.empty()) return obs;
  double sum = 0.0;
  for (double v : obs.values) sum += v;
  const double mean = sum / static_cast<double>(obs.values.size());
  for (auto& v : obs.values) v -= mean;
  return obs;
}

}  // namespace roadloc
