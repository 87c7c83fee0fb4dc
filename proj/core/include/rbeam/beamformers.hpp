#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rbeam/array.hpp"
#include "rbeam/hpd.hpp"

namespace rbeam {

enum class MeanKind { Riemannian, Euclidean, LogEuclidean, PerSegment };
enum class BeamformerKind { DelaySum, Subspace, Mvdr, Intersection };
enum class SubspaceRule { MeanMatrix, PerSegment, Oracle };

// Power response of a beamformer over a grid of candidate directions.
// segment_index is -1 for patterns computed from a mean matrix and the
// segment number for per-segment patterns.
struct BeamPattern {
  Eigen::VectorXd thetas;
  Eigen::VectorXd power;
  BeamformerKind kind = BeamformerKind::DelaySum;
  MeanKind mean_kind = MeanKind::Riemannian;
  int segment_index = -1;
};

// Directions picked from a pattern, strongest first. complete is false when
// fewer peaks than requested survive the separation constraint.
struct DoaEstimate {
  std::vector<double> directions;
  std::vector<double> peak_powers;
  bool complete = true;
};

// Uniform grid of arrival angles in radians over [lo, hi], endpoints
// included. Throws EmptyGrid for fewer than two points.
Eigen::VectorXd doa_grid(int points, double lo = -M_PI / 2.0,
                         double hi = M_PI / 2.0);

// Number of dominant eigenvalues of a correlation matrix, used as the
// signal-subspace dimension. MeanMatrix keeps eigenvalues above mean plus
// one standard deviation; PerSegment keeps eigenvalues above 1.5 times the
// mean. Both floor the count at one. Oracle returns oracle_dim unchanged.
int estimate_subspace_dim(const HpdMatrix& gamma, SubspaceRule rule,
                          int oracle_dim = 1);

// Conventional delay-and-sum response d(theta)^H Gamma d(theta) scanned over
// the grid.
BeamPattern ds_beam_pattern(const HpdMatrix& gamma, const ArrayGeometry& geom,
                            const Eigen::VectorXd& thetas, double wavelength);

// Subspace beamformer: squared norm of the steering vector projected onto
// the span of the n_d leading eigenvectors of Gamma.
BeamPattern sbsp_beam_pattern(const HpdMatrix& gamma,
                              const ArrayGeometry& geom,
                              const Eigen::VectorXd& thetas, double wavelength,
                              int subspace_dim);

// Minimum-variance response 1 / (d^H Gamma^{-1} d).
BeamPattern mvdr_beam_pattern(const HpdMatrix& gamma,
                              const ArrayGeometry& geom,
                              const Eigen::VectorXd& thetas,
                              double wavelength);

// Intersection-of-subspaces beamformer. Forms the product of the
// per-segment orthogonal projectors onto each segment's signal subspace (in
// segment order), takes the subspace_dim leading eigenvectors of that
// product by eigenvalue magnitude, re-orthonormalizes them, and scans the
// projection power of the steering vector. per_segment_dims gives each
// segment's subspace dimension. When symmetrize is set the projector
// product P is replaced by (P + P^H) / 2 before the eigendecomposition.
BeamPattern intersection_beam_pattern(
    const std::vector<HpdMatrix>& segments, const ArrayGeometry& geom,
    const Eigen::VectorXd& thetas, double wavelength,
    const std::vector<int>& per_segment_dims, int subspace_dim,
    bool symmetrize = false);

// Strict local maxima of the pattern (boundary points count when they top
// their one neighbor), greedily accepted strongest-first subject to a
// minimum angular separation. Ties in power resolve toward the smaller
// angle.
DoaEstimate pick_peaks(const BeamPattern& pattern, int count,
                       double min_separation);

}  // namespace rbeam
