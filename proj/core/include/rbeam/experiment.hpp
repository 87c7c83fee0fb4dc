#pragma once

#include <cstdint>
#include <vector>

#include "rbeam/pipeline.hpp"
#include "rbeam/scenario.hpp"

namespace rbeam {

// Monte-Carlo study of the arc layout: a ULA in a shoebox room, the desired
// source and the interference sources placed on a horizontal arc around the
// array center, one trial per random placement. activation_probability < 0
// assigns interference j to segment j mod segments (disjoint single-segment
// activity); otherwise each (source, segment) cell is an independent
// Bernoulli draw.
struct ArcExperimentConfig {
  int mics = 12;
  double spacing = 0.0436;
  Eigen::Vector3d room_dims = Eigen::Vector3d(5.0, 4.0, 3.5);
  Eigen::Vector3d array_first = Eigen::Vector3d(2.0436, 1.0, 2.0);
  double t60 = 0.15;
  int air_length = 2048;
  double fs = 16000.0;
  StftConfig stft;
  double snr_db = 50.0;
  double input_sir_db = -6.0;
  int n_interference = 2;
  int segments = 2;
  double activation_probability = -1.0;
  double arc_radius = 2.0;
  double arc_span_deg = 140.0;
  double desired_height = 1.8;
  double interference_height_min = 0.5;
  double interference_height_max = 3.0;
  double min_separation_deg = 15.0;
  double interference_spacing_deg = 2.0;
  int grid_points = 181;
  int trials = 20;
  std::uint64_t seed = 61u;
  MeanConfig mean_config;

  void validate() const;
};

// One random placement with its ground-truth directions.
struct TrialScene {
  Scenario scenario;
  double theta_desired = 0.0;
  std::vector<double> theta_interference;
};

TrialScene make_arc_scenario(const ArcExperimentConfig& config,
                             std::uint64_t trial_seed);

// One (trial, mean, beamformer) measurement.
struct MetricRow {
  int trial = 0;
  MeanKind mean = MeanKind::Riemannian;
  BeamformerKind beamformer = BeamformerKind::DelaySum;
  double output_sir_db = 0.0;
  double doa_error_deg = 0.0;
  double directivity_db = 0.0;
  bool sir_infinite = false;
};

std::vector<MetricRow> run_arc_trial(
    const ArcExperimentConfig& config, int trial,
    const std::vector<MeanKind>& means,
    const std::vector<BeamformerKind>& beamformers);

// All trials, serially, with per-trial seeds derived from the master seed so
// the result set does not depend on execution order.
std::vector<MetricRow> run_arc_experiment(
    const ArcExperimentConfig& config,
    const std::vector<MeanKind>& means = {MeanKind::Riemannian,
                                          MeanKind::Euclidean},
    const std::vector<BeamformerKind>& beamformers = {
        BeamformerKind::DelaySum, BeamformerKind::Subspace});

// Values of one metric for one (mean, beamformer) cell.
std::vector<double> metric_values(const std::vector<MetricRow>& rows,
                                  MeanKind mean, BeamformerKind beamformer,
                                  double MetricRow::* field);

// Linear-interpolation percentile; fraction in [0, 1].
double percentile(std::vector<double> values, double fraction);

// Aggregated sweep over scenario axes; each point reruns the Monte-Carlo
// study with the base config's trial count.
struct SweepRow {
  double input_sir_db = 0.0;
  double snr_db = 0.0;
  double t60 = 0.0;
  MeanKind mean = MeanKind::Riemannian;
  BeamformerKind beamformer = BeamformerKind::DelaySum;
  double sir_db_p25 = 0.0;
  double sir_db_p50 = 0.0;
  double sir_db_p75 = 0.0;
  double directivity_db_p25 = 0.0;
  double directivity_db_p50 = 0.0;
  double directivity_db_p75 = 0.0;
  double doa_error_deg_p50 = 0.0;
  int trials = 0;
};

std::vector<SweepRow> run_sweep(
    const ArcExperimentConfig& base, const std::vector<double>& input_sirs_db,
    const std::vector<double>& snrs_db, const std::vector<double>& t60s,
    const std::vector<MeanKind>& means = {MeanKind::Riemannian,
                                          MeanKind::Euclidean},
    const std::vector<BeamformerKind>& beamformers = {
        BeamformerKind::DelaySum, BeamformerKind::Subspace});

const char* mean_kind_name(MeanKind kind);
const char* beamformer_name(BeamformerKind kind);

}  // namespace rbeam
