#include "roadloc/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "roadloc/grid_map.hpp"
#include "roadloc/imaging.hpp"
#include "roadloc/matcher.hpp"
#include "roadloc/sensing.hpp"

namespace roadloc {

namespace {

struct CommonOpts {
  std::string config_path;
  std::string output_path;
  bool human = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_human = true) {
  cmd->add_option("-c,--config", opts.config_path, "key = value config file");
  cmd->add_option("-o,--output", opts.output_path, "output file (default: stdout)");
  if (with_human)
    cmd->add_flag("--human", opts.human, "aligned table instead of CSV");
}

RunConfig load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) return RunConfig{};
  return parse_config_file(opts.config_path);
}

// Streams rows to the chosen output file, or to the caller's stream.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
      stream_ = &file_;
    }
  }

  std::ostream& get() { return *stream_; }

  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_ && !path.empty())
      throw std::runtime_error("write failed for output file: " + path);
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct CellTable {
  RunConfig cfg;
  CameraConfig cam;
  CellGrid grid;
  WeightVector weights;
};

CellTable build_cell_table(const CommonOpts& opts) {
  CellTable t;
  t.cfg = load_config(opts);
  t.cam = t.cfg.camera();
  t.grid = visible_cell_grid(t.cam, t.cfg.cell_side_cm, t.cfg.lateral_offset_cm);
  if (t.grid.size() == 0)
    throw std::invalid_argument("no whole cells are visible with this configuration");
  t.weights = gramian_weights(t.grid.cells, t.cam);
  return t;
}

void cmd_geometry(const CommonOpts& opts, std::ostream& fallback) {
  const CellTable t = build_cell_table(opts);
  OutputTarget target(opts.output_path, fallback);
  std::ostream& out = target.get();
  char buf[256];

  if (opts.human) {
    out << "  row  col       x_l       x_u       z_l       z_u     area_cm2       weight\n";
    for (std::size_t k = 0; k < t.grid.size(); ++k) {
      const auto& c = t.grid.cells[k];
      std::snprintf(buf, sizeof buf, "%5ld%5ld%10.6g%10.6g%10.6g%10.6g%13.6g%13.6g\n",
                    t.grid.index[k].row, t.grid.index[k].col, c.x_l, c.x_u, c.z_l,
                    c.z_u, footprint_area(c, t.cam), t.weights.g[k]);
      out << buf;
    }
  } else {
    out << "row,col,x_l_cm,x_u_cm,fwd_l_cm,fwd_u_cm,z_l_cm,z_u_cm,area_cm2,weight\n";
    for (std::size_t k = 0; k < t.grid.size(); ++k) {
      const auto& c = t.grid.cells[k];
      const double fwd_l = static_cast<double>(t.grid.index[k].row) * t.grid.cell_side_cm;
      std::snprintf(buf, sizeof buf, "%ld,%ld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                    t.grid.index[k].row, t.grid.index[k].col, c.x_l, c.x_u, fwd_l,
                    fwd_l + t.grid.cell_side_cm, c.z_l, c.z_u,
                    footprint_area(c, t.cam), t.weights.g[k]);
      out << buf;
    }
  }
  target.finish(opts.output_path);
}

void cmd_snr(const CommonOpts& opts, double amplitude_flag, std::ostream& fallback) {
  const CellTable t = build_cell_table(opts);
  const double amplitude = amplitude_flag > 0.0 ? amplitude_flag : t.cfg.snr_amplitude;
  if (!(amplitude > 0.0))
    throw std::invalid_argument("snr: amplitude must be positive");

  OutputTarget target(opts.output_path, fallback);
  std::ostream& out = target.get();
  char buf[224];

  if (opts.human) {
    out << "  row  col     area_cm2     variance          snr\n";
    for (std::size_t k = 0; k < t.grid.size(); ++k) {
      const auto& c = t.grid.cells[k];
      std::snprintf(buf, sizeof buf, "%5ld%5ld%13.6g%13.6g%13.6g\n",
                    t.grid.index[k].row, t.grid.index[k].col, footprint_area(c, t.cam),
                    cell_noise_variance(c, t.cam), cell_snr(amplitude, c, t.cam));
      out << buf;
    }
  } else {
    out << "row,col,area_cm2,noise_variance,snr\n";
    for (std::size_t k = 0; k < t.grid.size(); ++k) {
      const auto& c = t.grid.cells[k];
      std::snprintf(buf, sizeof buf, "%ld,%ld,%.9g,%.9g,%.9g\n", t.grid.index[k].row,
                    t.grid.index[k].col, footprint_area(c, t.cam),
                    cell_noise_variance(c, t.cam), cell_snr(amplitude, c, t.cam));
      out << buf;
    }
  }
  target.finish(opts.output_path);
}

void cmd_simulate(const CommonOpts& opts, const RunConfig& cfg, std::ostream& fallback) {
  const ErrorCurve curve = run_amplitude_sweep(cfg.experiment());
  OutputTarget target(opts.output_path, fallback);
  std::ostream& out = target.get();

  if (opts.human) {
    const bool with_sd = !curve.sd_standard.empty();
    out << (with_sd ? " amplitude    p_err_std    p_err_gen       sd_std       sd_gen\n"
                    : " amplitude    p_err_std    p_err_gen\n");
    char buf[160];
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (with_sd)
        std::snprintf(buf, sizeof buf, "%10.4g%13.6g%13.6g%13.6g%13.6g\n",
                      curve.amplitude[i], curve.p_err_standard[i],
                      curve.p_err_generalized[i], curve.sd_standard[i],
                      curve.sd_generalized[i]);
      else
        std::snprintf(buf, sizeof buf, "%10.4g%13.6g%13.6g\n", curve.amplitude[i],
                      curve.p_err_standard[i], curve.p_err_generalized[i]);
      out << buf;
    }
  } else {
    write_curve_csv(curve, out);
  }
  target.finish(opts.output_path);
}

void cmd_classify(const CommonOpts& opts, const std::string& map_path,
                  const std::string& obs_path, std::ostream& fallback) {
  const CellTable t = build_cell_table(opts);
  const GridMap map = read_map_file(map_path);
  const GridMap obs_map = read_map_file(obs_path);

  if (obs_map.rows != 1)
    throw std::invalid_argument("classify: observation file must be a single-row grid, got " +
                                std::to_string(obs_map.rows) + " rows");
  if (obs_map.cols != t.grid.size())
    throw std::invalid_argument("classify: observation has " + std::to_string(obs_map.cols) +
                                " values but the configured grid has " +
                                std::to_string(t.grid.size()) + " visible cells");

  Observation obs;
  obs.values = obs_map.cells;
  obs.cell_refs = t.grid.cells;
  for (const auto& cell : t.grid.cells)
    obs.variances.push_back(cell_noise_variance(cell, t.cam));

  const std::vector<CellOffset> offsets = feasible_offsets(map, t.grid);
  if (offsets.empty())
    throw std::invalid_argument(
        "classify: map is too small to contain the visible grid at any offset");

  std::vector<AmplitudeVector> candidates;
  candidates.reserve(offsets.size());
  for (const auto& off : offsets)
    candidates.push_back(extract_candidate(map, off, t.grid));

  const MatchResult gen = ml_classify(obs, candidates, t.weights);
  const MatchResult std_match = euclid_classify(obs, candidates);

  OutputTarget target(opts.output_path, fallback);
  std::ostream& out = target.get();
  char buf[160];
  if (opts.human) {
    std::snprintf(buf, sizeof buf,
                  "generalized: offset (%ld, %ld), score %.6g%s\n"
                  "standard:    offset (%ld, %ld), score %.6g%s\n",
                  offsets[gen.best_index].row, offsets[gen.best_index].col,
                  gen.scores[gen.best_index], gen.tie ? " (tie)" : "",
                  offsets[std_match.best_index].row, offsets[std_match.best_index].col,
                  std_match.scores[std_match.best_index], std_match.tie ? " (tie)" : "");
    out << buf;
  } else {
    out << "matcher,offset_row,offset_col,score,tie\n";
    std::snprintf(buf, sizeof buf, "generalized,%ld,%ld,%.9g,%d\n",
                  offsets[gen.best_index].row, offsets[gen.best_index].col,
                  gen.scores[gen.best_index], gen.tie ? 1 : 0);
    out << buf;
    std::snprintf(buf, sizeof buf, "standard,%ld,%ld,%.9g,%d\n",
                  offsets[std_match.best_index].row, offsets[std_match.best_index].col,
                  std_match.scores[std_match.best_index], std_match.tie ? 1 : 0);
    out << buf;
  }
  target.finish(opts.output_path);
}

void cmd_rectify(const CommonOpts& opts, const std::string& image_path, bool raw,
                 bool center, std::ostream& fallback) {
  const CellTable t = build_cell_table(opts);
  const GrayImage img = read_pgm(image_path);

  Observation obs = rectify_to_cells(img, t.cam, t.grid.cells, t.cfg.samples_per_cell);
  if (!raw) obs = map_pixels_to_amplitudes(std::move(obs), t.cfg.amp_scale);
  if (center) obs = zero_center(std::move(obs));

  GridMap row;
  row.rows = 1;
  row.cols = obs.size();
  row.cell_side_cm = t.cfg.cell_side_cm;
  row.origin_forward_cm = 0.0;
  row.origin_lateral_cm = 0.0;
  row.cells = obs.values;

  OutputTarget target(opts.output_path, fallback);
  write_map_stream(row, target.get());
  target.finish(opts.output_path);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"perspective-aware road-grid localization tools"};
  app.require_subcommand(1);

  CommonOpts geometry_opts;
  CLI::App* geometry = app.add_subcommand(
      "geometry", "visible-cell table with footprint areas and weights");
  add_common(geometry, geometry_opts);

  CommonOpts snr_opts;
  double snr_amplitude = 0.0;
  CLI::App* snr = app.add_subcommand("snr", "per-cell signal-to-noise table");
  add_common(snr, snr_opts);
  snr->add_option("-a,--amplitude", snr_amplitude, "road amplitude (default from config)");

  CommonOpts sim_opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "amplitude sweep comparing both matchers");
  add_common(simulate, sim_opts);
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false, sim_stddev = false;
  std::size_t sim_trials = 0;
  std::string sim_mode;
  unsigned sim_threads = 0;
  simulate->add_option("--seed", sim_seed, "master seed")->each([&](const std::string&) {
    sim_seed_set = true;
  });
  simulate->add_option("--trials", sim_trials, "trials per amplitude");
  simulate->add_option("--mode", sim_mode, "analytic or empirical");
  simulate->add_option("--threads", sim_threads, "worker threads");
  simulate->add_flag("--record-stddev", sim_stddev, "add per-point stddev columns");

  CommonOpts classify_opts;
  std::string map_path, obs_path;
  CLI::App* classify =
      app.add_subcommand("classify", "best-offset match of an observation against a map");
  add_common(classify, classify_opts);
  classify->add_option("--map", map_path, "reference map file")->required();
  classify->add_option("--obs", obs_path, "observation file (single-row grid)")->required();

  CommonOpts rectify_opts;
  std::string image_path;
  bool rectify_raw = false, rectify_center = false;
  CLI::App* rectify =
      app.add_subcommand("rectify", "PGM image to per-cell amplitude file");
  add_common(rectify, rectify_opts, /*with_human=*/false);
  rectify->add_option("--image", image_path, "input PGM image")->required();
  rectify->add_flag("--raw", rectify_raw, "keep raw mean intensities");
  rectify->add_flag("--zero-center", rectify_center, "subtract the global mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (geometry->parsed()) {
      cmd_geometry(geometry_opts, out);
    } else if (snr->parsed()) {
      cmd_snr(snr_opts, snr_amplitude, out);
    } else if (simulate->parsed()) {
      RunConfig cfg = load_config(sim_opts);
      if (sim_seed_set) cfg.master_seed = sim_seed;
      if (sim_trials > 0) cfg.trials = sim_trials;
      if (!sim_mode.empty()) cfg.mode = sim_mode;
      if (sim_threads > 0) cfg.threads = sim_threads;
      if (sim_stddev) cfg.record_stddev = true;
      cmd_simulate(sim_opts, cfg, out);
    } else if (classify->parsed()) {
      cmd_classify(classify_opts, map_path, obs_path, out);
    } else if (rectify->parsed()) {
      cmd_rectify(rectify_opts, image_path, rectify_raw, rectify_center, out);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return 4;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace roadloc
