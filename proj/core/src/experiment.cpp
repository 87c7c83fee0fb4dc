#include "rbeam/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rbeam/errors.hpp"
#include "rbeam/metrics.hpp"
#include "rbeam/rng.hpp"
#include "rbeam/room_sim.hpp"

namespace rbeam {

namespace {

constexpr double kDegree = M_PI / 180.0;

double uniform(std::mt19937_64& eng, double lo, double hi) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Angles on the arc: desired first, then interferences kept clear of the
// desired direction and of each other. Rejection sampling with a hard cap
// so impossible constraints fail loudly.
std::vector<double> draw_directions(const ArcExperimentConfig& cfg,
                                    std::mt19937_64& eng) {
  const double half_span = 0.5 * cfg.arc_span_deg * kDegree;
  const double min_sep = cfg.min_separation_deg * kDegree;
  const double pair_sep = cfg.interference_spacing_deg * kDegree;

  std::vector<double> thetas;
  thetas.push_back(uniform(eng, -half_span, half_span));
  int attempts = 0;
  while (static_cast<int>(thetas.size()) < cfg.n_interference + 1) {
    if (++attempts > 100000) {
      throw ConfigError("cannot place sources with the requested separations");
    }
    const double candidate = uniform(eng, -half_span, half_span);
    if (std::abs(candidate - thetas.front()) < min_sep) {
      continue;
    }
    const bool crowded =
        std::any_of(thetas.begin() + 1, thetas.end(), [&](double t) {
          return std::abs(t - candidate) < pair_sep;
        });
    if (!crowded) {
      thetas.push_back(candidate);
    }
  }
  return thetas;
}

std::vector<std::vector<bool>> draw_activation(const ArcExperimentConfig& cfg,
                                               std::mt19937_64& eng) {
  std::vector<std::vector<bool>> activation(
      cfg.n_interference, std::vector<bool>(cfg.segments, false));
  if (cfg.activation_probability < 0.0) {
    for (int j = 0; j < cfg.n_interference; ++j) {
      activation[j][j % cfg.segments] = true;
    }
  } else {
    for (int j = 0; j < cfg.n_interference; ++j) {
      for (int i = 0; i < cfg.segments; ++i) {
        activation[j][i] = uniform(eng, 0.0, 1.0) < cfg.activation_probability;
      }
    }
  }
  return activation;
}

}  // namespace

void ArcExperimentConfig::validate() const {
  stft.validate();
  if (mics < 2 || !(spacing > 0.0)) {
    throw ConfigError("arc experiment needs a real array");
  }
  if (n_interference < 1 || segments < 1 || trials < 1) {
    throw ConfigError("interference count, segments, and trials must be positive");
  }
  if (!(arc_span_deg > 0.0) || arc_span_deg > 180.0) {
    throw ConfigError("arc span must lie in (0, 180] degrees");
  }
  if (activation_probability > 1.0) {
    throw ConfigError("activation probability above 1");
  }
  if (grid_points < 2) {
    throw ConfigError("direction grid too small");
  }
}

TrialScene make_arc_scenario(const ArcExperimentConfig& config,
                             std::uint64_t trial_seed) {
  config.validate();
  std::mt19937_64 eng(derive_seed(trial_seed, 1));

  TrialScene scene;
  scene.scenario.room.dimensions = config.room_dims;
  scene.scenario.room.t60 = config.t60;
  scene.scenario.room.air_length = config.air_length;
  scene.scenario.room.fs = config.fs;
  scene.scenario.array =
      ArrayGeometry::ula(config.mics, config.spacing, config.array_first);
  scene.scenario.snr_db = config.snr_db;
  scene.scenario.seed = derive_seed(trial_seed, 2);
  scene.scenario.segment_samples =
      config.stft.segment_frames * config.stft.hop;

  const std::vector<double> thetas = draw_directions(config, eng);
  scene.theta_desired = thetas.front();
  scene.theta_interference.assign(thetas.begin() + 1, thetas.end());
  const std::vector<std::vector<bool>> activation =
      draw_activation(config, eng);

  const Eigen::Vector3d center = scene.scenario.array.centroid();
  const double interference_power =
      std::pow(10.0, -config.input_sir_db / 10.0);

  SourceSpec desired;
  desired.kind = SourceKind::Desired;
  desired.power = 1.0;
  desired.position =
      Eigen::Vector3d(center.x() + config.arc_radius * std::sin(thetas[0]),
                      center.y() + config.arc_radius * std::cos(thetas[0]),
                      config.desired_height);
  desired.activation.assign(config.segments, true);
  scene.scenario.sources.push_back(desired);

  for (int j = 0; j < config.n_interference; ++j) {
    SourceSpec src;
    src.kind = SourceKind::Interference;
    src.power = interference_power;
    const double theta = thetas[j + 1];
    const double height = uniform(eng, config.interference_height_min,
                                  config.interference_height_max);
    src.position =
        Eigen::Vector3d(center.x() + config.arc_radius * std::sin(theta),
                        center.y() + config.arc_radius * std::cos(theta),
                        height);
    src.activation = activation[j];
    scene.scenario.sources.push_back(src);
  }
  scene.scenario.validate();
  return scene;
}

std::vector<MetricRow> run_arc_trial(
    const ArcExperimentConfig& config, int trial,
    const std::vector<MeanKind>& means,
    const std::vector<BeamformerKind>& beamformers) {
  const TrialScene scene =
      make_arc_scenario(config, derive_seed(config.seed, trial));

  const double duration =
      duration_for_segments(scene.scenario, config.segments,
                            config.stft.window_size, config.stft.hop);
  const Eigen::MatrixXd signals = render_signals(scene.scenario, duration);

  const StftFrames frames =
      stft_bin(signals, config.stft.window_size, config.stft.hop,
               config.stft.bin_index);
  const std::vector<HpdMatrix> segments =
      segment_correlations(frames, config.stft.segment_frames, 0.0, true)
          .segments;

  PipelineConfig pipeline;
  pipeline.stft = config.stft;
  pipeline.grid_points = config.grid_points;
  pipeline.mean_config = config.mean_config;

  const Eigen::VectorXd thetas = doa_grid(config.grid_points);
  const double wavelength = pipeline.wavelength(config.fs);

  std::vector<MetricRow> rows;
  for (BeamformerKind bf : beamformers) {
    for (MeanKind mean : means) {
      pipeline.mean = mean;
      pipeline.beamformer = bf;
      const BeamPattern pattern = pattern_from_segments(
          segments, scene.scenario.array, thetas, wavelength, pipeline);
      const DoaEstimate doa = pick_peaks(pattern, 1, 0.0);
      const OutputSir sir =
          output_sir(pattern, scene.theta_desired, scene.theta_interference);

      MetricRow row;
      row.trial = trial;
      row.mean = bf == BeamformerKind::Intersection ? MeanKind::PerSegment
                                                    : mean;
      row.beamformer = bf;
      row.sir_infinite = sir.has_infinite;
      row.output_sir_db = to_db(sir.mean);
      row.doa_error_deg =
          std::abs(doa.directions.front() - scene.theta_desired) / kDegree;
      row.directivity_db = to_db(
          pipeline_directivity(segments, scene.scenario.array, wavelength,
                               pipeline, scene.theta_desired));
      rows.push_back(row);

      // The intersection beamformer ignores the mean kind; one row is enough.
      if (bf == BeamformerKind::Intersection) {
        break;
      }
    }
  }
  return rows;
}

std::vector<MetricRow> run_arc_experiment(
    const ArcExperimentConfig& config, const std::vector<MeanKind>& means,
    const std::vector<BeamformerKind>& beamformers) {
  std::vector<MetricRow> rows;
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::vector<MetricRow> trial_rows =
        run_arc_trial(config, trial, means, beamformers);
    rows.insert(rows.end(), trial_rows.begin(), trial_rows.end());
  }
  return rows;
}

std::vector<double> metric_values(const std::vector<MetricRow>& rows,
                                  MeanKind mean, BeamformerKind beamformer,
                                  double MetricRow::* field) {
  std::vector<double> values;
  for (const MetricRow& row : rows) {
    if (row.mean == mean && row.beamformer == beamformer) {
      values.push_back(row.*field);
    }
  }
  return values;
}

double percentile(std::vector<double> values, double fraction) {
  if (values.empty()) {
    throw EmptyInput("percentile of an empty set");
  }
  if (fraction < 0.0 || fraction > 1.0) {
    throw InvalidArgument("percentile fraction must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double pos = fraction * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = static_cast<size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * values[lo] + w * values[hi];
}

std::vector<SweepRow> run_sweep(const ArcExperimentConfig& base,
                                const std::vector<double>& input_sirs_db,
                                const std::vector<double>& snrs_db,
                                const std::vector<double>& t60s,
                                const std::vector<MeanKind>& means,
                                const std::vector<BeamformerKind>& beamformers) {
  if (input_sirs_db.empty() || snrs_db.empty() || t60s.empty()) {
    throw ConfigError("sweep axes must be nonempty");
  }
  std::vector<SweepRow> rows;
  for (size_t a = 0; a < input_sirs_db.size(); ++a) {
    for (size_t b = 0; b < snrs_db.size(); ++b) {
      for (size_t c = 0; c < t60s.size(); ++c) {
        const double input_sir = input_sirs_db[a];
        const double snr = snrs_db[b];
        const double t60 = t60s[c];
        ArcExperimentConfig cfg = base;
        cfg.input_sir_db = input_sir;
        cfg.snr_db = snr;
        cfg.t60 = t60;
        // Each axis point gets its own seed stream so trials never repeat
        // across points, yet reruns stay deterministic.
        const std::uint64_t point =
            (a * snrs_db.size() + b) * t60s.size() + c;
        cfg.seed = derive_seed(base.seed, 500000 + point);
        const std::vector<MetricRow> metric_rows =
            run_arc_experiment(cfg, means, beamformers);
        for (BeamformerKind bf : beamformers) {
          for (MeanKind mean : means) {
            const MeanKind cell = bf == BeamformerKind::Intersection
                                      ? MeanKind::PerSegment
                                      : mean;
            const std::vector<double> sirs =
                metric_values(metric_rows, cell, bf, &MetricRow::output_sir_db);
            if (sirs.empty()) {
              continue;
            }
            const std::vector<double> dirs = metric_values(
                metric_rows, cell, bf, &MetricRow::directivity_db);
            const std::vector<double> errs = metric_values(
                metric_rows, cell, bf, &MetricRow::doa_error_deg);
            SweepRow row;
            row.input_sir_db = input_sir;
            row.snr_db = snr;
            row.t60 = t60;
            row.mean = cell;
            row.beamformer = bf;
            row.sir_db_p25 = percentile(sirs, 0.25);
            row.sir_db_p50 = percentile(sirs, 0.50);
            row.sir_db_p75 = percentile(sirs, 0.75);
            row.directivity_db_p25 = percentile(dirs, 0.25);
            row.directivity_db_p50 = percentile(dirs, 0.50);
            row.directivity_db_p75 = percentile(dirs, 0.75);
            row.doa_error_deg_p50 = percentile(errs, 0.50);
            row.trials = static_cast<int>(sirs.size());
            rows.push_back(row);
            if (bf == BeamformerKind::Intersection) {
              break;
            }
          }
        }
      }
    }
  }
  return rows;
}

const char* mean_kind_name(MeanKind kind) {
  switch (kind) {
    case MeanKind::Riemannian:
      return "riemannian";
    case MeanKind::Euclidean:
      return "euclidean";
    case MeanKind::LogEuclidean:
      return "logeuclidean";
    default:
      return "persegment";
  }
}

const char* beamformer_name(BeamformerKind kind) {
  switch (kind) {
    case BeamformerKind::DelaySum:
      return "ds";
    case BeamformerKind::Subspace:
      return "sbsp";
    case BeamformerKind::Mvdr:
      return "mvdr";
    default:
      return "intersection";
  }
}

}  // namespace rbeam
