#include "rbeam/pipeline.hpp"

#include <cmath>

#include "rbeam/errors.hpp"
#include "rbeam/room_sim.hpp"

namespace rbeam {

namespace {

std::vector<int> segment_dims(const std::vector<HpdMatrix>& segments,
                              const PipelineConfig& config) {
  std::vector<int> dims;
  dims.reserve(segments.size());
  for (const HpdMatrix& g : segments) {
    dims.push_back(config.subspace_rule == SubspaceRule::Oracle
                       ? estimate_subspace_dim(g, SubspaceRule::Oracle,
                                               config.oracle_dim)
                       : estimate_subspace_dim(g, SubspaceRule::PerSegment));
  }
  return dims;
}

// Dimension of the signal subspace for the pattern itself. The mean matrix
// drives the estimate even for the intersection beamformer, whose
// per-segment dimensions are estimated separately.
int pattern_subspace_dim(const std::vector<HpdMatrix>& segments,
                         const PipelineConfig& config) {
  if (config.subspace_rule == SubspaceRule::Oracle) {
    return config.oracle_dim;
  }
  const MeanKind kind =
      config.mean == MeanKind::PerSegment ? MeanKind::Riemannian : config.mean;
  const HpdMatrix mean = mean_of_segments(segments, kind, config.mean_config);
  return estimate_subspace_dim(mean, SubspaceRule::MeanMatrix);
}

BeamPattern pattern_from_mean(const HpdMatrix& mean, const ArrayGeometry& geom,
                              const Eigen::VectorXd& thetas, double wavelength,
                              BeamformerKind kind, int subspace_dim) {
  switch (kind) {
    case BeamformerKind::DelaySum:
      return ds_beam_pattern(mean, geom, thetas, wavelength);
    case BeamformerKind::Subspace:
      return sbsp_beam_pattern(mean, geom, thetas, wavelength, subspace_dim);
    case BeamformerKind::Mvdr:
      return mvdr_beam_pattern(mean, geom, thetas, wavelength);
    default:
      throw InvalidArgument("beamformer needs per-segment matrices");
  }
}

}  // namespace

double PipelineConfig::wavelength(double fs) const {
  const double bin_hz = stft.bin_index * fs / stft.window_size;
  if (!(bin_hz > 0.0)) {
    throw InvalidArgument("bin frequency must be positive");
  }
  return kSpeedOfSound / bin_hz;
}

HpdMatrix mean_of_segments(const std::vector<HpdMatrix>& segments,
                           MeanKind kind, const MeanConfig& cfg,
                           int* iterations, bool* converged) {
  if (iterations != nullptr) {
    *iterations = 0;
  }
  if (converged != nullptr) {
    *converged = true;
  }
  switch (kind) {
    case MeanKind::Riemannian: {
      const KarcherResult r = karcher_mean(segments, cfg);
      if (iterations != nullptr) {
        *iterations = r.iterations;
      }
      if (converged != nullptr) {
        *converged = r.converged;
      }
      return r.mean;
    }
    case MeanKind::Euclidean:
      return euclidean_mean(segments);
    case MeanKind::LogEuclidean:
      return log_euclidean_mean(segments);
    default:
      throw InvalidArgument("per-segment processing has no single mean");
  }
}

BeamPattern pattern_from_segments(const std::vector<HpdMatrix>& segments,
                                  const ArrayGeometry& geom,
                                  const Eigen::VectorXd& thetas,
                                  double wavelength,
                                  const PipelineConfig& config) {
  if (config.beamformer == BeamformerKind::Intersection) {
    BeamPattern p = intersection_beam_pattern(
        segments, geom, thetas, wavelength, segment_dims(segments, config),
        pattern_subspace_dim(segments, config),
        config.symmetrize_intersection);
    p.mean_kind = MeanKind::PerSegment;
    return p;
  }

  const MeanKind kind =
      config.mean == MeanKind::PerSegment ? MeanKind::Riemannian : config.mean;
  const HpdMatrix mean = mean_of_segments(segments, kind, config.mean_config);
  const int dim = config.beamformer == BeamformerKind::Subspace
                      ? (config.subspace_rule == SubspaceRule::Oracle
                             ? config.oracle_dim
                             : estimate_subspace_dim(mean,
                                                     SubspaceRule::MeanMatrix))
                      : 1;
  BeamPattern p = pattern_from_mean(mean, geom, thetas, wavelength,
                                    config.beamformer, dim);
  p.mean_kind = kind;
  return p;
}

BatchResult doa_batch(const Eigen::MatrixXd& signals,
                      const ArrayGeometry& geom, const PipelineConfig& config,
                      double fs) {
  config.stft.validate();
  const StftFrames frames = stft_bin(signals, config.stft.window_size,
                                     config.stft.hop, config.stft.bin_index);
  BatchResult out;
  out.segments =
      segment_correlations(frames, config.stft.segment_frames,
                           config.diagonal_loading, config.auto_loading)
          .segments;

  const Eigen::VectorXd thetas = doa_grid(config.grid_points);
  const double wavelength = config.wavelength(fs);

  if (config.beamformer == BeamformerKind::Intersection) {
    out.subspace_dim = pattern_subspace_dim(out.segments, config);
    out.pattern = intersection_beam_pattern(
        out.segments, geom, thetas, wavelength,
        segment_dims(out.segments, config), out.subspace_dim,
        config.symmetrize_intersection);
    out.pattern.mean_kind = MeanKind::PerSegment;
  } else {
    const MeanKind kind = config.mean == MeanKind::PerSegment
                              ? MeanKind::Riemannian
                              : config.mean;
    out.mean = mean_of_segments(out.segments, kind, config.mean_config,
                                &out.mean_iterations, &out.mean_converged);
    out.subspace_dim =
        config.beamformer == BeamformerKind::Subspace
            ? (config.subspace_rule == SubspaceRule::Oracle
                   ? config.oracle_dim
                   : estimate_subspace_dim(*out.mean,
                                           SubspaceRule::MeanMatrix))
            : 1;
    out.pattern = pattern_from_mean(*out.mean, geom, thetas, wavelength,
                                    config.beamformer, out.subspace_dim);
    out.pattern.mean_kind = kind;
  }
  out.doa = pick_peaks(out.pattern, 1, 0.0);
  return out;
}

StreamingResult doa_streaming(const Eigen::MatrixXd& signals,
                              const ArrayGeometry& geom,
                              const PipelineConfig& config, double fs) {
  if (config.beamformer == BeamformerKind::Intersection) {
    throw InvalidArgument("streaming does not support the intersection beamformer");
  }
  if (config.mean != MeanKind::Riemannian &&
      config.mean != MeanKind::Euclidean) {
    throw InvalidArgument("streaming supports riemannian and euclidean means");
  }
  config.stft.validate();
  const StftFrames frames = stft_bin(signals, config.stft.window_size,
                                     config.stft.hop, config.stft.bin_index);
  const std::vector<HpdMatrix> segments =
      segment_correlations(frames, config.stft.segment_frames,
                           config.diagonal_loading, config.auto_loading)
          .segments;

  const Eigen::VectorXd thetas = doa_grid(config.grid_points);
  const double wavelength = config.wavelength(fs);

  StreamingResult out;
  out.running_means.reserve(segments.size());
  for (size_t i = 0; i < segments.size(); ++i) {
    const int step = static_cast<int>(i) + 1;
    if (i == 0) {
      out.running_means.push_back(segments[0]);
    } else if (config.mean == MeanKind::Riemannian) {
      out.running_means.push_back(streaming_riemannian_update(
          out.running_means.back(), segments[i], step));
    } else {
      out.running_means.push_back(HpdMatrix(streaming_euclidean_update(
          out.running_means.back().entries(), segments[i].entries(), step)));
    }
    const int dim =
        config.beamformer == BeamformerKind::Subspace
            ? (config.subspace_rule == SubspaceRule::Oracle
                   ? config.oracle_dim
                   : estimate_subspace_dim(out.running_means.back(),
                                           SubspaceRule::MeanMatrix))
            : 1;
    BeamPattern p =
        pattern_from_mean(out.running_means.back(), geom, thetas, wavelength,
                          config.beamformer, dim);
    p.mean_kind = config.mean;
    p.segment_index = static_cast<int>(i);
    out.estimates.push_back(pick_peaks(p, 1, 0.0).directions.front());
    if (i + 1 == segments.size()) {
      out.final_pattern = std::move(p);
    }
  }
  return out;
}

double pipeline_directivity(const std::vector<HpdMatrix>& segments,
                            const ArrayGeometry& geom, double wavelength,
                            const PipelineConfig& config, double theta_desired,
                            int polar_points) {
  const Eigen::VectorXd psis = polar_angles(polar_points);
  const Eigen::VectorXd arrivals = arrival_angles_for_polar(psis);
  BeamPattern polar =
      pattern_from_segments(segments, geom, arrivals, wavelength, config);
  polar.thetas = psis;
  return directivity(polar, theta_desired);
}

}  // namespace rbeam
