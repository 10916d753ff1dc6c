#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "roadloc/experiment.hpp"
#include "roadloc/matcher.hpp"
#include "roadloc/rng.hpp"
#include "roadloc/sensing.hpp"
#include "support/oracles.hpp"

using namespace roadloc;

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

ExperimentConfig stock_experiment() {
  ExperimentConfig cfg;
  cfg.camera.focal_length_cm = 0.0367;
  cfg.camera.height_cm = 58.3095;
  cfg.camera.pitch_rad = 35.9020 * kDeg;
  cfg.camera.vfov_rad = 39.2962 * kDeg;
  cfg.camera.hfov_rad = 70.5288 * kDeg;
  cfg.camera.noise_density = 0.0018;
  cfg.amplitudes = {1.0};
  cfg.trials_per_amplitude = 10;
  cfg.master_seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg = stock_experiment();
  CHECK_NOTHROW(cfg.validate());

  SUBCASE("amplitude list") {
    cfg.amplitudes = {};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.amplitudes = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.amplitudes = {1.0, 1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.amplitudes = {2.0, 1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  SUBCASE("counts") {
    cfg.trials_per_amplitude = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = stock_experiment();
    cfg.threads = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  SUBCASE("camera errors surface") {
    cfg.camera.pitch_rad = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  SUBCASE("oversized cells leave nothing visible") {
    cfg.cell_side_cm = 1e6;
    CHECK_THROWS_AS(run_amplitude_sweep(cfg), std::invalid_argument);
  }
}

TEST_CASE("single analytic trial reproduces the pairwise closed form") {
  ExperimentConfig cfg = stock_experiment();
  cfg.trials_per_amplitude = 1;
  cfg.master_seed = 99;
  cfg.amplitudes = {1.5};

  const CellGrid grid =
      visible_cell_grid(cfg.camera, cfg.cell_side_cm, cfg.lateral_offset_cm);
  const WeightVector w = gramian_weights(grid.cells, cfg.camera);
  const double pref = snr_prefactor(cfg.camera);

  Xoshiro256pp rng(derive_seed(cfg.master_seed, 0, 0));
  std::vector<double> u_star(grid.size()), u_hat(grid.size());
  for (double& v : u_star) v = rng.sign_bit() ? 1.5 : -1.5;
  do {
    for (double& v : u_hat) v = rng.sign_bit() ? 1.5 : -1.5;
  } while (u_hat == u_star);

  const ErrorCurve curve = run_amplitude_sweep(cfg);
  REQUIRE(curve.size() == 1);
  CHECK(curve.p_err_generalized[0] ==
        1.0 - std_normal_cdf(weighted_error_argument(u_star, u_hat, w.g, pref)));
  CHECK(curve.p_err_standard[0] ==
        1.0 - std_normal_cdf(unweighted_error_argument(u_star, u_hat, w.g, pref)));
}

TEST_CASE("single empirical trial reproduces a hand-rolled draw") {
  ExperimentConfig cfg = stock_experiment();
  cfg.mode = ExperimentConfig::Mode::empirical;
  cfg.trials_per_amplitude = 1;
  cfg.master_seed = 7;
  cfg.amplitudes = {0.8};

  const CellGrid grid =
      visible_cell_grid(cfg.camera, cfg.cell_side_cm, cfg.lateral_offset_cm);
  const WeightVector w = gramian_weights(grid.cells, cfg.camera);

  Xoshiro256pp rng(derive_seed(cfg.master_seed, 0, 0));
  const std::size_t n = grid.size();
  std::vector<double> u_star(n), u_hat(n), noise(n);
  for (double& v : u_star) v = rng.sign_bit() ? 0.8 : -0.8;
  do {
    for (double& v : u_hat) v = rng.sign_bit() ? 0.8 : -0.8;
  } while (u_hat == u_star);
  fill_gaussian(rng, noise);

  double sw_star = 0.0, sw_hat = 0.0, se_star = 0.0, se_hat = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double obs =
        u_star[k] + std::sqrt(cell_noise_variance(grid.cells[k], cfg.camera)) * noise[k];
    const double ds = obs - u_star[k];
    const double dh = obs - u_hat[k];
    sw_star += w.g[k] * ds * ds;
    sw_hat += w.g[k] * dh * dh;
    se_star += ds * ds;
    se_hat += dh * dh;
  }

  const ErrorCurve curve = run_amplitude_sweep(cfg);
  CHECK(curve.p_err_generalized[0] == (sw_hat < sw_star ? 1.0 : 0.0));
  CHECK(curve.p_err_standard[0] == (se_hat < se_star ? 1.0 : 0.0));
}

TEST_CASE("sweep output is deterministic and thread-count independent") {
  ExperimentConfig cfg = stock_experiment();
  cfg.amplitudes = {0.5, 1.0, 2.0, 4.0};
  cfg.trials_per_amplitude = 200;
  cfg.record_stddev = true;

  auto csv_of = [](const ErrorCurve& c) {
    std::ostringstream out;
    write_curve_csv(c, out);
    return out.str();
  };

  for (const auto mode :
       {ExperimentConfig::Mode::analytic, ExperimentConfig::Mode::empirical}) {
    cfg.mode = mode;
    cfg.threads = 1;
    const std::string serial = csv_of(run_amplitude_sweep(cfg));
    CHECK(csv_of(run_amplitude_sweep(cfg)) == serial);
    cfg.threads = 4;
    CHECK(csv_of(run_amplitude_sweep(cfg)) == serial);
    cfg.threads = 32;
    CHECK(csv_of(run_amplitude_sweep(cfg)) == serial);
  }

  SUBCASE("seed changes the draw") {
    cfg.mode = ExperimentConfig::Mode::analytic;
    cfg.threads = 1;
    const std::string base = csv_of(run_amplitude_sweep(cfg));
    cfg.master_seed = 2;
    CHECK(csv_of(run_amplitude_sweep(cfg)) != base);
  }
}

TEST_CASE("sweep statistics behave") {
  ExperimentConfig cfg = stock_experiment();
  cfg.amplitudes = {0.5, 1.0, 2.0, 4.0};
  cfg.trials_per_amplitude = 2000;
  cfg.record_stddev = true;
  cfg.threads = 4;

  SUBCASE("analytic curve decreases and the weighted matcher dominates") {
    const ErrorCurve c = run_amplitude_sweep(cfg);
    REQUIRE(c.size() == 4);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c.p_err_generalized[i] <= c.p_err_standard[i] + 1e-12);
      CHECK(c.p_err_standard[i] > 0.0);
      CHECK(c.p_err_standard[i] < 0.5);
      if (i > 0) {
        const double slack =
            2.0 * (c.sd_standard[i] + c.sd_standard[i - 1]) / std::sqrt(2000.0);
        CHECK(c.p_err_standard[i] < c.p_err_standard[i - 1] + slack);
        CHECK(c.p_err_generalized[i] < c.p_err_generalized[i - 1] + slack);
      }
    }
  }

  SUBCASE("empirical mode agrees with analytic within Monte Carlo error") {
    cfg.amplitudes = {1.0};
    cfg.trials_per_amplitude = 10000;
    cfg.mode = ExperimentConfig::Mode::analytic;
    const ErrorCurve ana = run_amplitude_sweep(cfg);
    cfg.mode = ExperimentConfig::Mode::empirical;
    const ErrorCurve emp = run_amplitude_sweep(cfg);

    const double se_sum =
        3.0 * (ana.sd_standard[0] + emp.sd_standard[0]) / std::sqrt(10000.0);
    CHECK(std::abs(ana.p_err_standard[0] - emp.p_err_standard[0]) < se_sum);
    const double se_gen =
        3.0 * (ana.sd_generalized[0] + emp.sd_generalized[0]) / std::sqrt(10000.0);
    CHECK(std::abs(ana.p_err_generalized[0] - emp.p_err_generalized[0]) < se_gen);
  }

  SUBCASE("empirical stddev matches the Bernoulli form") {
    cfg.amplitudes = {1.0};
    cfg.trials_per_amplitude = 10000;
    cfg.mode = ExperimentConfig::Mode::empirical;
    const ErrorCurve c = run_amplitude_sweep(cfg);
    const double p = c.p_err_standard[0];
    CHECK(c.sd_standard[0] == doctest::Approx(std::sqrt(p * (1.0 - p))).epsilon(0.02));
  }

  SUBCASE("stddev columns appear only on request") {
    cfg.record_stddev = false;
    const ErrorCurve c = run_amplitude_sweep(cfg);
    CHECK(c.sd_standard.empty());
    CHECK(c.sd_generalized.empty());
  }
}

TEST_CASE("curve csv round trips") {
  ErrorCurve curve;
  curve.amplitude = {0.5, 1.0, 4.0};
  curve.p_err_standard = {0.341234567, 0.207, 1.25e-05};
  curve.p_err_generalized = {0.282, 0.1258, 1e-09};

  SUBCASE("without stddev") {
    std::ostringstream out;
    write_curve_csv(curve, out);
    const std::string text = out.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "amplitude,p_err_standard,p_err_generalized");
    std::istringstream in(text);
    const ErrorCurve back = read_curve_csv(in, "mem");
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.amplitude[i] == doctest::Approx(curve.amplitude[i]).epsilon(1e-9));
      CHECK(back.p_err_standard[i] ==
            doctest::Approx(curve.p_err_standard[i]).epsilon(1e-8));
      CHECK(back.p_err_generalized[i] ==
            doctest::Approx(curve.p_err_generalized[i]).epsilon(1e-8));
    }
    CHECK(back.sd_standard.empty());
  }

  SUBCASE("with stddev") {
    curve.sd_standard = {0.47, 0.40, 0.003};
    curve.sd_generalized = {0.45, 0.33, 0.0001};
    std::ostringstream out;
    write_curve_csv(curve, out);
    std::istringstream in(out.str());
    const ErrorCurve back = read_curve_csv(in, "mem");
    REQUIRE(back.sd_standard.size() == 3);
    CHECK(back.sd_generalized[1] == doctest::Approx(0.33).epsilon(1e-9));
  }

  SUBCASE("empty curve is just the header") {
    const ErrorCurve empty;
    std::ostringstream out;
    write_curve_csv(empty, out);
    CHECK(out.str() == "amplitude,p_err_standard,p_err_generalized\n");
    std::istringstream in(out.str());
    CHECK(read_curve_csv(in, "mem").size() == 0);
  }

  SUBCASE("ragged columns rejected on write") {
    curve.p_err_generalized.pop_back();
    std::ostringstream out;
    CHECK_THROWS_AS(write_curve_csv(curve, out), std::invalid_argument);
  }

  SUBCASE("parse errors carry the label and line number") {
    std::istringstream empty("");
    CHECK_THROWS_WITH_AS(read_curve_csv(empty, "f"), doctest::Contains("f:1"),
                         std::runtime_error);

    std::istringstream bad_header("amp,std,gen\n1,2,3\n");
    CHECK_THROWS_WITH_AS(read_curve_csv(bad_header, "f"),
                         doctest::Contains("header"), std::runtime_error);

    std::istringstream short_row(
        "amplitude,p_err_standard,p_err_generalized\n1.0,0.3\n");
    CHECK_THROWS_WITH_AS(read_curve_csv(short_row, "f"), doctest::Contains("f:2"),
                         std::runtime_error);

    std::istringstream long_row(
        "amplitude,p_err_standard,p_err_generalized\n1.0,0.3,0.2,0.1\n");
    CHECK_THROWS_AS(read_curve_csv(long_row, "f"), std::runtime_error);

    std::istringstream bad_num(
        "amplitude,p_err_standard,p_err_generalized\n1.0,x,0.2\n");
    CHECK_THROWS_WITH_AS(read_curve_csv(bad_num, "f"),
                         doctest::Contains("malformed number"), std::runtime_error);
  }

  SUBCASE("file round trip") {
    const oracles::TempFile tmp("curve.csv");
    write_curve_csv(curve, tmp.path());
    const ErrorCurve back = read_curve_csv(tmp.path());
    REQUIRE(back.size() == 3);
    CHECK(back.amplitude[2] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(read_curve_csv(std::string("/nonexistent/curve.csv")),
                    std::runtime_error);
  }
}
