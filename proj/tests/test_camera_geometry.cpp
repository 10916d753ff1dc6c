#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "roadloc/camera_geometry.hpp"
#include "support/oracles.hpp"

using namespace roadloc;

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

CameraConfig stock_camera() {
  CameraConfig cfg;
  cfg.focal_length_cm = 0.0367;
  cfg.height_cm = 58.3095;
  cfg.pitch_rad = 35.9020 * kDeg;
  cfg.vfov_rad = 39.2962 * kDeg;
  cfg.hfov_rad = 70.5288 * kDeg;
  cfg.noise_density = 0.0018;
  return cfg;
}

}  // namespace

TEST_CASE("config validation rejects out-of-range fields") {
  CameraConfig cfg = stock_camera();
  CHECK_NOTHROW(cfg.validate());

  CameraConfig bad = cfg;
  bad.focal_length_cm = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.height_cm = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.pitch_rad = 91.0 * kDeg;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.pitch_rad = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // Upper frustum ray reaching the horizon makes visible depth infinite.
  bad = cfg;
  bad.vfov_rad = 2.0 * bad.pitch_rad;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.noise_density = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sensor half extents follow the FOV") {
  const CameraConfig cfg = stock_camera();
  CHECK(cfg.sensor_half_width() ==
        doctest::Approx(cfg.focal_length_cm * std::tan(cfg.hfov_rad / 2.0)).epsilon(1e-15));
  CHECK(cfg.sensor_half_height() ==
        doctest::Approx(cfg.focal_length_cm * std::tan(cfg.vfov_rad / 2.0)).epsilon(1e-15));
  CHECK(cfg.sensor_half_width() > 0.0);
  CHECK(cfg.sensor_half_height() > 0.0);
}

TEST_CASE("projection of known points") {
  const CameraConfig cfg = stock_camera();

  SUBCASE("optical-axis symmetry: x = 0 projects to x_t = 0") {
    for (double z : {40.0, 99.0, 200.0})
      CHECK(project_point({0.0, z}, cfg).x_t == 0.0);
  }

  SUBCASE("lateral projection scales as f/z") {
    const FocalPoint q = project_point({20.0, 100.0}, cfg);
    CHECK(q.x_t == doctest::Approx(0.00734).epsilon(1e-12));
    // Frozen from direct evaluation, cross-checked below via backproject.
    CHECK(q.y_t == doctest::Approx(0.00014976978964205065).epsilon(1e-12));
  }

  SUBCASE("y_t crosses zero exactly at z = h/sin(pitch)") {
    const double z0 = cfg.height_cm / std::sin(cfg.pitch_rad);
    CHECK(z0 == doctest::Approx(99.43628434475875).epsilon(1e-12));
    CHECK(std::abs(project_point({0.0, z0}, cfg).y_t) < 1e-15);
  }

  SUBCASE("road points stay below the horizon row") {
    const double horizon = cfg.focal_length_cm * std::tan(cfg.pitch_rad);
    for (double z : {40.0, 100.0, 200.0, 5000.0})
      CHECK(project_point({0.0, z}, cfg).y_t < horizon);
  }

  SUBCASE("non-positive depth is rejected") {
    CHECK_THROWS_AS(project_point({0.0, 0.0}, cfg), std::domain_error);
    CHECK_THROWS_AS(project_point({0.0, -5.0}, cfg), std::domain_error);
  }
}

TEST_CASE("backprojection inverts projection") {
  const CameraConfig cfg = stock_camera();

  SUBCASE("y_t = 0 lands at z = h/sin(pitch)") {
    const RoadPoint p = backproject({0.0, 0.0}, cfg);
    CHECK(p.z_cm == doctest::Approx(99.43628434475875).epsilon(1e-12));
    CHECK(p.x_cm == 0.0);
  }

  SUBCASE("round trip over a road grid, 1e-9 cm") {
    for (double z = 40.0; z <= 200.0; z += 8.0) {
      for (double x = -60.0; x <= 60.0; x += 7.5) {
        const RoadPoint back = backproject(project_point({x, z}, cfg), cfg);
        CHECK(std::abs(back.x_cm - x) < 1e-9);
        CHECK(std::abs(back.z_cm - z) < 1e-9);
      }
    }
  }

  SUBCASE("focal-plane round trip") {
    const FocalPoint q{0.004, -0.01};
    const FocalPoint again = project_point(backproject(q, cfg), cfg);
    CHECK(again.x_t == doctest::Approx(q.x_t).epsilon(1e-12));
    CHECK(again.y_t == doctest::Approx(q.y_t).epsilon(1e-12));
  }

  SUBCASE("horizon and sky rays are rejected") {
    const double horizon = cfg.focal_length_cm * std::tan(cfg.pitch_rad);
    CHECK_THROWS_AS(backproject({0.0, horizon}, cfg), std::domain_error);
    CHECK_THROWS_AS(backproject({0.0, horizon + 0.01}, cfg), std::domain_error);
  }
}

TEST_CASE("jacobian determinant") {
  const CameraConfig cfg = stock_camera();

  SUBCASE("frozen value at z = 100") {
    CHECK(jacobian_det(100.0, cfg) ==
          doctest::Approx(-9.695608608672023e-08).epsilon(1e-12));
  }

  SUBCASE("negative sign and cubic decay") {
    const double d40 = jacobian_det(40.0, cfg);
    const double d80 = jacobian_det(80.0, cfg);
    CHECK(d40 < 0.0);
    CHECK(d80 < 0.0);
    CHECK(d40 / d80 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::abs(d80) < std::abs(d40));
  }

  SUBCASE("magnitude matches finite differences over z in [40, 200]") {
    for (double z = 40.0; z <= 200.0; z += 10.0) {
      for (double x : {-30.0, 0.0, 45.0}) {
        const double fd = oracles::fd_jacobian({x, z}, cfg).det();
        const double analytic = jacobian_det(z, cfg);
        CHECK(std::abs(std::abs(fd) - std::abs(analytic)) <=
              1e-6 * std::abs(analytic));
      }
    }
  }

  SUBCASE("z <= 0 rejected") {
    CHECK_THROWS_AS(jacobian_det(0.0, cfg), std::domain_error);
    CHECK_THROWS_AS(jacobian_det(-10.0, cfg), std::domain_error);
  }
}

TEST_CASE("footprint area") {
  const CameraConfig cfg = stock_camera();
  const RoadRegion near{-10.0, 10.0, 40.0, 60.0};
  const RoadRegion far{-10.0, 10.0, 180.0, 200.0};

  SUBCASE("frozen values for near and far cells") {
    CHECK(footprint_area(near, cfg) ==
          doctest::Approx(0.00033665307669000083).epsilon(1e-12));
    CHECK(footprint_area(far, cfg) ==
          doctest::Approx(5.685696406320013e-06).epsilon(1e-12));
  }

  SUBCASE("near/far ratio depends only on the depth factors") {
    const double ratio = footprint_area(near, cfg) / footprint_area(far, cfg);
    const double expected = (1.0 / (40.0 * 40.0) - 1.0 / (60.0 * 60.0)) /
                            (1.0 / (180.0 * 180.0) - 1.0 / (200.0 * 200.0));
    CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(59.21052631578949).epsilon(1e-12));
  }

  SUBCASE("agrees with 2-D quadrature of |det J| from finite differences") {
    for (const RoadRegion& r : {near, far, RoadRegion{5.0, 55.0, 77.0, 140.0}}) {
      const double quad = oracles::footprint_area_quadrature(r, cfg);
      CHECK(footprint_area(r, cfg) == doctest::Approx(quad).epsilon(1e-6));
    }
  }

  SUBCASE("additive under partition in depth and in x") {
    const RoadRegion whole{-10.0, 10.0, 40.0, 90.0};
    for (double zm : {41.0, 60.0, 89.5}) {
      const double parts = footprint_area({-10.0, 10.0, 40.0, zm}, cfg) +
                           footprint_area({-10.0, 10.0, zm, 90.0}, cfg);
      CHECK(parts == doctest::Approx(footprint_area(whole, cfg)).epsilon(1e-14));
    }
    const double lateral_parts = footprint_area({-10.0, 3.0, 40.0, 90.0}, cfg) +
                                 footprint_area({3.0, 10.0, 40.0, 90.0}, cfg);
    CHECK(lateral_parts == doctest::Approx(footprint_area(whole, cfg)).epsilon(1e-14));
  }

  SUBCASE("strictly shrinks when pushed to larger depth") {
    double prev = footprint_area({-10.0, 10.0, 40.0, 60.0}, cfg);
    for (double shift = 10.0; shift <= 120.0; shift += 10.0) {
      const double cur = footprint_area({-10.0, 10.0, 40.0 + shift, 60.0 + shift}, cfg);
      CHECK(cur < prev);
      prev = cur;
    }
  }

  SUBCASE("degenerate slivers report zero area") {
    CHECK(footprint_area({-10.0, -10.0, 40.0, 60.0}, cfg) == 0.0);
    CHECK(footprint_area({-10.0, 10.0, 40.0, 40.0}, cfg) == 0.0);
  }

  SUBCASE("out-of-order and non-positive-depth regions are rejected") {
    CHECK_THROWS_AS(footprint_area({10.0, -10.0, 40.0, 60.0}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(footprint_area({-10.0, 10.0, 60.0, 40.0}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(footprint_area({-10.0, 10.0, 0.0, 60.0}, cfg), std::domain_error);
  }
}

TEST_CASE("ground/depth conversions invert each other") {
  const CameraConfig cfg = stock_camera();
  for (double d : {0.0, 40.0, 123.4, 200.0}) {
    const double z = ground_to_depth(d, cfg);
    CHECK(depth_to_ground(z, cfg) == doctest::Approx(d).epsilon(1e-12));
  }
  CHECK_THROWS_AS(depth_to_ground(0.0, cfg), std::domain_error);
}

TEST_CASE("visible cell enumeration") {
  const CameraConfig cfg = stock_camera();

  SUBCASE("stock setup yields the 66-cell staircase") {
    const CellGrid grid = visible_cell_grid(cfg, 20.0, -10.0);
    REQUIRE(grid.size() == 66);

    // Count cells per depth row, nearest first.
    std::vector<long> rows;
    std::vector<int> counts;
    for (const auto& ix : grid.index) {
      if (rows.empty() || rows.back() != ix.row) {
        rows.push_back(ix.row);
        counts.push_back(0);
      }
      ++counts.back();
    }
    const std::vector<long> expected_rows{2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<int> expected_counts{5, 5, 7, 7, 9, 9, 11, 13};
    CHECK(rows == expected_rows);
    CHECK(counts == expected_counts);
  }

  SUBCASE("ordering is near-to-far then left-to-right") {
    const CellGrid grid = visible_cell_grid(cfg, 20.0, -10.0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const bool row_advances = grid.index[k].row > grid.index[k - 1].row;
      const bool col_advances = grid.index[k].row == grid.index[k - 1].row &&
                                grid.index[k].col > grid.index[k - 1].col;
      CHECK((row_advances || col_advances));
    }
    CHECK(grid.cells.front().z_l < grid.cells.back().z_l);
  }

  SUBCASE("cell regions carry camera-frame depths of the row edges") {
    const CellGrid grid = visible_cell_grid(cfg, 20.0, -10.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double d_l = static_cast<double>(grid.index[k].row) * 20.0;
      CHECK(grid.cells[k].z_l ==
            doctest::Approx(ground_to_depth(d_l, cfg)).epsilon(1e-15));
      CHECK(grid.cells[k].z_u ==
            doctest::Approx(ground_to_depth(d_l + 20.0, cfg)).epsilon(1e-15));
      CHECK(grid.cells[k].x_l ==
            doctest::Approx(-10.0 + 20.0 * static_cast<double>(grid.index[k].col))
                .epsilon(1e-15));
    }
  }

  SUBCASE("matches the angle-based enumeration oracle") {
    for (double offset : {-10.0, 0.0, -17.0}) {
      const CellGrid grid = visible_cell_grid(cfg, 20.0, offset);
      const auto expected = oracles::enumerate_visible(cfg, 20.0, offset);
      REQUIRE(grid.size() == expected.size());
      for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(grid.index[k].row == expected[k].row);
        CHECK(grid.index[k].col == expected[k].col);
      }
    }
  }

  SUBCASE("narrowing the vertical FOV keeps a subset of rows") {
    CameraConfig narrow = cfg;
    narrow.vfov_rad *= 0.6;
    const CellGrid full = visible_cell_grid(cfg, 20.0, -10.0);
    const CellGrid sub = visible_cell_grid(narrow, 20.0, -10.0);
    CHECK(sub.size() < full.size());
    CHECK(sub.size() > 0);
    long lo_full = full.index.front().row, hi_full = full.index.back().row;
    for (const auto& ix : sub.index) {
      CHECK(ix.row >= lo_full);
      CHECK(ix.row <= hi_full);
    }
    // Every sub cell must also be in the full set.
    for (const auto& ix : sub.index) {
      bool found = false;
      for (const auto& fx : full.index)
        if (fx.row == ix.row && fx.col == ix.col) {
          found = true;
          break;
        }
      CHECK(found);
    }
  }

  SUBCASE("near cells outside the lower frustum ray are excluded") {
    const CellGrid grid = visible_cell_grid(cfg, 20.0, -10.0);
    for (const auto& ix : grid.index) CHECK(ix.row >= 2);  // rows 0,1 too close
  }

  SUBCASE("deterministic and pure") {
    const CellGrid a = visible_cell_grid(cfg, 20.0, -10.0);
    const CellGrid b = visible_cell_grid(cfg, 20.0, -10.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a.cells[k].x_l == b.cells[k].x_l);
      CHECK(a.cells[k].z_l == b.cells[k].z_l);
    }
  }

  SUBCASE("wrapper returns the same regions") {
    const CellGrid grid = visible_cell_grid(cfg, 20.0, -10.0);
    const auto cells = visible_whole_cells(cfg, 20.0, -10.0);
    REQUIRE(cells.size() == grid.size());
    for (std::size_t k = 0; k < cells.size(); ++k)
      CHECK(cells[k].z_l == grid.cells[k].z_l);
  }

  SUBCASE("invalid tesselation parameters rejected") {
    CHECK_THROWS_AS(visible_cell_grid(cfg, 0.0, -10.0), std::invalid_argument);
    CHECK_THROWS_AS(visible_cell_grid(cfg, -5.0, -10.0), std::invalid_argument);
  }
}
