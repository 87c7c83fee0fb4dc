#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rbeam/errors.hpp"

namespace rbeam {

// Microphone positions in meters, one column per microphone, with a reference
// microphone whose steering phase is pinned to zero.
struct ArrayGeometry {
  Eigen::Matrix3Xd positions;
  int reference_index = 0;

  int size() const { return static_cast<int>(positions.cols()); }
  Eigen::Vector3d centroid() const { return positions.rowwise().mean(); }

  void validate() const;

  // Uniform linear array along +x starting at `first`.
  static ArrayGeometry ula(int mics, double spacing,
                           const Eigen::Vector3d& first = Eigen::Vector3d::Zero());
};

// Far-field plane-wave steering vector for arrival angle `theta` (radians,
// measured from broadside; the wave direction is (sin theta, cos theta, 0)).
// Entry m carries phase 2*pi/lambda * (p_m - p_ref) . u(theta); the reference
// entry is exactly 1 and every entry has unit modulus.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta,
                                 double wavelength);

// Relative transfer function: the ATF normalized by its reference entry.
Eigen::VectorXcd atf_to_rtf(const Eigen::VectorXcd& h, int reference_index = 0);

// Normalized squared inner product |<a,b>|^2 / (|a|^2 |b|^2) in [0, 1].
double correlation_coefficient(const Eigen::VectorXcd& a,
                               const Eigen::VectorXcd& b);

}  // namespace rbeam
