// Command-line front end: render scenarios, run the estimation pipeline,
// sweep experiment grids, and run the numerical verification suites.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rbeam/errors.hpp"
#include "rbeam/experiment.hpp"
#include "rbeam/io.hpp"
#include "rbeam/pipeline.hpp"
#include "rbeam/room_sim.hpp"
#include "rbeam/scenario.hpp"
#include "rbeam/verify.hpp"

namespace {

constexpr double kDegree = M_PI / 180.0;

rbeam::MeanKind parse_mean(const std::string& name) {
  if (name == "riemannian") return rbeam::MeanKind::Riemannian;
  if (name == "euclidean") return rbeam::MeanKind::Euclidean;
  if (name == "logeuclidean") return rbeam::MeanKind::LogEuclidean;
  throw rbeam::ConfigError("unknown mean '" + name +
                           "', expected riemannian, euclidean or logeuclidean");
}

rbeam::BeamformerKind parse_beamformer(const std::string& name) {
  if (name == "ds") return rbeam::BeamformerKind::DelaySum;
  if (name == "sbsp") return rbeam::BeamformerKind::Subspace;
  if (name == "mvdr") return rbeam::BeamformerKind::Mvdr;
  if (name == "intersection") return rbeam::BeamformerKind::Intersection;
  throw rbeam::ConfigError("unknown beamformer '" + name +
                           "', expected ds, sbsp, mvdr or intersection");
}

std::filesystem::path prepare_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw rbeam::IoError("cannot create output directory '" + out +
                         "': " + ec.message());
  }
  return dir;
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j) {
  rbeam::write_text_file(path.string(), j.dump(2) + "\n");
}

Eigen::Vector3d vec3_field(const nlohmann::json& j, const char* key,
                           const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) {
    throw rbeam::ConfigError(std::string(key) +
                             " must be an array of three numbers");
  }
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

// Fills an arc experiment description from the [experiment] table; absent
// keys keep the defaults.
rbeam::ArcExperimentConfig experiment_from_json(const nlohmann::json& j) {
  rbeam::ArcExperimentConfig c;
  c.mics = j.value("mics", c.mics);
  c.spacing = j.value("spacing", c.spacing);
  c.room_dims = vec3_field(j, "room_dims", c.room_dims);
  c.array_first = vec3_field(j, "array_first", c.array_first);
  c.t60 = j.value("t60", c.t60);
  c.air_length = j.value("air_length", c.air_length);
  c.fs = j.value("fs", c.fs);
  c.snr_db = j.value("snr_db", c.snr_db);
  c.input_sir_db = j.value("input_sir_db", c.input_sir_db);
  c.n_interference = j.value("n_interference", c.n_interference);
  c.segments = j.value("segments", c.segments);
  c.activation_probability =
      j.value("activation_probability", c.activation_probability);
  c.arc_radius = j.value("arc_radius", c.arc_radius);
  c.arc_span_deg = j.value("arc_span_deg", c.arc_span_deg);
  c.desired_height = j.value("desired_height", c.desired_height);
  c.interference_height_min =
      j.value("interference_height_min", c.interference_height_min);
  c.interference_height_max =
      j.value("interference_height_max", c.interference_height_max);
  c.min_separation_deg = j.value("min_separation_deg", c.min_separation_deg);
  c.interference_spacing_deg =
      j.value("interference_spacing_deg", c.interference_spacing_deg);
  c.grid_points = j.value("grid_points", c.grid_points);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  if (j.contains("stft")) {
    const auto& s = j.at("stft");
    c.stft.window_size = s.value("window_size", c.stft.window_size);
    c.stft.hop = s.value("hop", c.stft.hop);
    c.stft.bin_index = s.value("bin_index", c.stft.bin_index);
    c.stft.segment_frames = s.value("segment_frames", c.stft.segment_frames);
  }
  if (j.contains("mean")) {
    const auto& m = j.at("mean");
    c.mean_config.tolerance = m.value("tolerance", c.mean_config.tolerance);
    c.mean_config.max_iterations =
        m.value("max_iterations", c.mean_config.max_iterations);
  }
  return c;
}

std::vector<double> double_list(const nlohmann::json& j, const char* key,
                                double fallback) {
  if (!j.contains(key)) return {fallback};
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  if (out.empty()) {
    throw rbeam::ConfigError(std::string(key) + " must not be empty");
  }
  return out;
}

struct SimulateArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int cmd_simulate(const SimulateArgs& args) {
  rbeam::Scenario sc = rbeam::load_scenario(args.config);
  if (args.seed_set) sc.seed = args.seed;
  sc.validate();

  // Render exactly the span the analysis consumes: `segments()` correlation
  // segments under the default STFT framing.
  const rbeam::StftConfig stft;
  const double duration = rbeam::duration_for_segments(
      sc, sc.segments(), stft.window_size, stft.hop);
  const Eigen::MatrixXd signals = rbeam::render_signals(sc, duration);

  const auto dir = prepare_out_dir(args.out);
  const auto wav_path = dir / "signals.wav";
  rbeam::write_wav(wav_path.string(), signals,
                   static_cast<int>(std::lround(sc.room.fs)));

  nlohmann::json meta;
  meta["scenario"] = rbeam::scenario_to_json(sc);
  meta["duration_s"] = duration;
  meta["channels"] = signals.rows();
  meta["samples"] = signals.cols();
  write_json_file(dir / "scenario.json", meta);

  std::printf("wrote %s (%d channels, %d samples at %g Hz)\n",
              wav_path.string().c_str(), static_cast<int>(signals.rows()),
              static_cast<int>(signals.cols()), sc.room.fs);
  return 0;
}

struct EstimateArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string mean = "riemannian";
  std::string beamformer = "ds";
  bool streaming = false;
  int oracle_dim = 0;
};

int cmd_estimate(const EstimateArgs& args) {
  rbeam::Scenario sc = rbeam::load_scenario(args.config);
  if (args.seed_set) sc.seed = args.seed;
  sc.validate();

  rbeam::PipelineConfig config;
  config.mean = parse_mean(args.mean);
  config.beamformer = parse_beamformer(args.beamformer);
  if (args.oracle_dim > 0) {
    config.subspace_rule = rbeam::SubspaceRule::Oracle;
    config.oracle_dim = args.oracle_dim;
  }

  const double fs = sc.room.fs;
  const double duration = rbeam::duration_for_segments(
      sc, sc.segments(), config.stft.window_size, config.stft.hop);
  const Eigen::MatrixXd signals = rbeam::render_signals(sc, duration);

  nlohmann::json report;
  report["mean"] = rbeam::mean_kind_name(config.mean);
  report["beamformer"] = rbeam::beamformer_name(config.beamformer);
  report["seed"] = sc.seed;
  report["streaming"] = args.streaming;

  rbeam::BeamPattern pattern;
  double top_estimate_deg = 0.0;
  if (args.streaming) {
    const rbeam::StreamingResult res =
        rbeam::doa_streaming(signals, sc.array, config, fs);
    nlohmann::json estimates = nlohmann::json::array();
    for (double theta : res.estimates) estimates.push_back(theta / kDegree);
    report["estimates_deg"] = estimates;
    pattern = res.final_pattern;
    top_estimate_deg = res.estimates.back() / kDegree;
  } else {
    const rbeam::BatchResult res =
        rbeam::doa_batch(signals, sc.array, config, fs);
    nlohmann::json directions = nlohmann::json::array();
    for (double theta : res.doa.directions) directions.push_back(theta / kDegree);
    nlohmann::json powers = nlohmann::json::array();
    for (double p : res.doa.peak_powers) powers.push_back(p);
    report["directions_deg"] = directions;
    report["peak_powers"] = powers;
    report["complete"] = res.doa.complete;
    report["segments"] = static_cast<int>(res.segments.size());
    report["subspace_dim"] = res.subspace_dim;
    if (res.mean.has_value()) {
      report["mean_iterations"] = res.mean_iterations;
      report["mean_converged"] = res.mean_converged;
    }
    pattern = res.pattern;
    top_estimate_deg =
        res.doa.directions.empty() ? 0.0 : res.doa.directions.front() / kDegree;
  }

  const auto dir = prepare_out_dir(args.out);
  rbeam::write_pattern_csv((dir / "pattern.csv").string(), pattern);
  write_json_file(dir / "pattern.json", rbeam::pattern_to_json(pattern));
  write_json_file(dir / "estimate.json", report);

  std::printf("%s/%s estimate: %.2f deg\n",
              rbeam::mean_kind_name(config.mean),
              rbeam::beamformer_name(config.beamformer), top_estimate_deg);
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int cmd_sweep(const SweepArgs& args) {
  const nlohmann::json cfg = rbeam::load_config(args.config);
  rbeam::ArcExperimentConfig base;
  std::vector<double> input_sirs;
  std::vector<double> snrs;
  std::vector<double> t60s;
  std::vector<rbeam::MeanKind> means;
  std::vector<rbeam::BeamformerKind> beamformers;
  try {
    base = experiment_from_json(cfg.value("experiment", nlohmann::json::object()));
    const nlohmann::json axes = cfg.value("axes", nlohmann::json::object());
    input_sirs = double_list(axes, "input_sir_db", base.input_sir_db);
    snrs = double_list(axes, "snr_db", base.snr_db);
    t60s = double_list(axes, "t60", base.t60);
    if (axes.contains("means")) {
      for (const auto& name : axes.at("means")) {
        means.push_back(parse_mean(name.get<std::string>()));
      }
    } else {
      means = {rbeam::MeanKind::Riemannian, rbeam::MeanKind::Euclidean};
    }
    if (axes.contains("beamformers")) {
      for (const auto& name : axes.at("beamformers")) {
        beamformers.push_back(parse_beamformer(name.get<std::string>()));
      }
    } else {
      beamformers = {rbeam::BeamformerKind::DelaySum,
                     rbeam::BeamformerKind::Subspace};
    }
  } catch (const nlohmann::json::exception& e) {
    throw rbeam::ConfigError(std::string("sweep config: ") + e.what());
  }
  if (args.seed_set) base.seed = args.seed;
  base.validate();

  const std::vector<rbeam::SweepRow> rows =
      rbeam::run_sweep(base, input_sirs, snrs, t60s, means, beamformers);

  const auto dir = prepare_out_dir(args.out);
  rbeam::write_sweep_csv((dir / "sweep.csv").string(), rows);
  write_json_file(dir / "sweep.json", rbeam::sweep_to_json(rows));

  std::printf("wrote %zu sweep rows to %s\n", rows.size(),
              (dir / "sweep.csv").string().c_str());
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const std::vector<rbeam::CheckResult> results =
      rbeam::verify_suite(suite, seed);
  for (const auto& r : results) {
    std::printf("[%s] %-28s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
  }
  const bool ok = rbeam::all_passed(results);
  std::printf("%zu checks, %s\n", results.size(), ok ? "all passed" : "FAILURES");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam patterns from Riemannian averaging of segment correlations"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Render a scenario to a multichannel WAV file");
  sim->add_option("--config", sim_args.config, "scenario TOML or JSON file")
      ->required();
  sim->add_option("--out", sim_args.out, "output directory");
  CLI::Option* sim_seed = sim->add_option("--seed", sim_args.seed,
                                          "override the scenario seed");

  EstimateArgs est_args;
  CLI::App* est = app.add_subcommand(
      "estimate", "Run the arrival-direction pipeline on a scenario");
  est->add_option("--config", est_args.config, "scenario TOML or JSON file")
      ->required();
  est->add_option("--out", est_args.out, "output directory");
  CLI::Option* est_seed = est->add_option("--seed", est_args.seed,
                                          "override the scenario seed");
  est->add_option("--mean", est_args.mean,
                  "correlation mean: riemannian, euclidean or logeuclidean");
  est->add_option("--beamformer", est_args.beamformer,
                  "beamformer: ds, sbsp, mvdr or intersection");
  est->add_flag("--streaming", est_args.streaming,
                "update the mean segment by segment");
  est->add_option("--oracle-dim", est_args.oracle_dim,
                  "fix the signal subspace dimension instead of inferring it");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a Monte Carlo experiment grid from a sweep config");
  sweep->add_option("--config", sweep_args.config, "sweep TOML or JSON file")
      ->required();
  sweep->add_option("--out", sweep_args.out, "output directory");
  CLI::Option* sweep_seed = sweep->add_option("--seed", sweep_args.seed,
                                              "override the experiment seed");

  std::string suite = "all";
  std::uint64_t verify_seed = 20260819u;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the numerical verification checks");
  verify->add_option(
      "--suite", suite,
      "geometry, lemma1, props, example1, misalignment or all");
  verify->add_option("--seed", verify_seed, "base seed for the checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sim)) {
      sim_args.seed_set = sim_seed->count() > 0;
      return cmd_simulate(sim_args);
    }
    if (app.got_subcommand(est)) {
      est_args.seed_set = est_seed->count() > 0;
      return cmd_estimate(est_args);
    }
    if (app.got_subcommand(sweep)) {
      sweep_args.seed_set = sweep_seed->count() > 0;
      return cmd_sweep(sweep_args);
    }
    if (app.got_subcommand(verify)) {
      return cmd_verify(suite, verify_seed);
    }
  } catch (const rbeam::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
