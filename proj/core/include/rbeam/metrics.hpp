#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rbeam/beamformers.hpp"

namespace rbeam {

// Pattern-based interference rejection. Ratios of the pattern value at the
// desired direction to the value at each interference direction, all via
// nearest-grid lookup. A denominator below 1e-300 yields +inf and sets
// has_infinite instead of throwing.
struct OutputSir {
  std::vector<double> per_interference;
  double mean = 0.0;
  bool has_infinite = false;
};

OutputSir output_sir(const BeamPattern& pattern, double theta_d,
                     const std::vector<double>& theta_interference);

// Polar angle grid on [0, pi] and the arrival angles that realize it. An
// arrival angle theta measured from broadside corresponds to the polar
// angle psi = pi/2 - theta from the array axis, so theta = asin(cos psi).
Eigen::VectorXd polar_angles(int points);
Eigen::VectorXd arrival_angles_for_polar(const Eigen::VectorXd& psis);

// Directivity of a pattern sampled on the polar grid [0, pi]: the pattern
// value toward the desired arrival angle over the sin-weighted average
// power, with the average taken by trapezoidal quadrature. Returns the
// linear ratio. Throws GridTooCoarse below 90 grid points.
double directivity(const BeamPattern& polar_pattern, double theta_d);

inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace rbeam
