#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rbeam/array.hpp"
#include "rbeam/beamformers.hpp"
#include "rbeam/manifold.hpp"
#include "rbeam/metrics.hpp"
#include "rbeam/stft.hpp"

namespace rbeam {

// Everything needed to go from time-domain microphone signals to a beam
// pattern and a direction estimate at one frequency bin.
struct PipelineConfig {
  StftConfig stft;
  MeanKind mean = MeanKind::Riemannian;
  BeamformerKind beamformer = BeamformerKind::DelaySum;
  SubspaceRule subspace_rule = SubspaceRule::MeanMatrix;
  int oracle_dim = 1;
  int grid_points = 181;
  MeanConfig mean_config;
  double diagonal_loading = 0.0;
  bool auto_loading = true;
  bool symmetrize_intersection = false;

  // Acoustic wavelength of the analyzed bin at sampling rate fs.
  double wavelength(double fs) const;
};

struct BatchResult {
  std::vector<HpdMatrix> segments;
  std::optional<HpdMatrix> mean;
  int mean_iterations = 0;
  bool mean_converged = true;
  int subspace_dim = 1;
  BeamPattern pattern;
  DoaEstimate doa;
};

// Streaming estimation: the running Riemannian (or Euclidean) mean is
// updated after every segment and a fresh estimate emitted each time.
struct StreamingResult {
  std::vector<double> estimates;
  std::vector<HpdMatrix> running_means;
  BeamPattern final_pattern;
};

// Mean of per-segment correlation matrices under the chosen geometry.
// MeanKind::PerSegment has no single mean and is rejected.
HpdMatrix mean_of_segments(const std::vector<HpdMatrix>& segments,
                           MeanKind kind, const MeanConfig& cfg = {},
                           int* iterations = nullptr,
                           bool* converged = nullptr);

// Beam pattern for the configured beamformer from already-segmented
// correlation matrices. `thetas` are arrival angles.
BeamPattern pattern_from_segments(const std::vector<HpdMatrix>& segments,
                                  const ArrayGeometry& geom,
                                  const Eigen::VectorXd& thetas,
                                  double wavelength,
                                  const PipelineConfig& config);

// Full batch pipeline: STFT bin extraction, segmentation, mean, pattern,
// peak pick.
BatchResult doa_batch(const Eigen::MatrixXd& signals,
                      const ArrayGeometry& geom, const PipelineConfig& config,
                      double fs);

// Streaming pipeline: one estimate per segment as the running mean evolves.
// Supports Riemannian and Euclidean means with the DS, subspace, and MVDR
// beamformers.
StreamingResult doa_streaming(const Eigen::MatrixXd& signals,
                              const ArrayGeometry& geom,
                              const PipelineConfig& config, double fs);

// Directivity of the configured beamformer evaluated on a polar grid
// spanning [0, pi], as required by the sin-weighted average. Returns the
// linear ratio.
double pipeline_directivity(const std::vector<HpdMatrix>& segments,
                            const ArrayGeometry& geom, double wavelength,
                            const PipelineConfig& config, double theta_desired,
                            int polar_points = 721);

}  // namespace rbeam
