#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rbeam/scenario.hpp"

namespace rbeam {

inline constexpr double kSpeedOfSound = 343.0;

// Shoebox acoustic impulse response between a source and a microphone,
// sampled at room.fs with room.air_length taps. Image sources are summed up
// to reflection order ceil(t60 * c / min_dimension) + 3 with uniform wall
// reflectivity derived from t60 by Sabine's formula; each arrival lands as
// an 8-tap windowed-sinc fractional delay with gain 1 / (4 pi distance).
// t60 = 0 keeps only the direct path.
Eigen::VectorXd image_source_air(const RoomSpec& room,
                                 const Eigen::Vector3d& source,
                                 const Eigen::Vector3d& mic);

// Time-domain microphone signals for the scenario: each source emits white
// Gaussian noise gated by its activation schedule, convolved with the
// per-pair impulse responses, plus spatially white sensor noise. The result
// is bit-identical for identical inputs; each source and the noise draw
// from fixed per-stream generators, so rendering a subset of sources (the
// mask overload, one flag per source) leaves the kept sources' samples and
// the noise unchanged.
Eigen::MatrixXd render_signals(const Scenario& sc, double duration_seconds);
Eigen::MatrixXd render_signals(const Scenario& sc, double duration_seconds,
                               const std::vector<bool>& source_mask);

// Number of samples rendered for a duration, and the duration that yields
// exactly `segments` full analysis segments once the trailing partial STFT
// frame is accounted for.
int render_length(const Scenario& sc, double duration_seconds);
double duration_for_segments(const Scenario& sc, int segments,
                             int window_size, int hop);

}  // namespace rbeam
