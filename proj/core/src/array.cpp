#include "rbeam/array.hpp"

#include <cmath>
#include <complex>

namespace rbeam {

void ArrayGeometry::validate() const {
  if (size() < 2) {
    throw InvalidArgument("ArrayGeometry: need at least two microphones");
  }
  if (!positions.allFinite()) {
    throw InvalidArgument("ArrayGeometry: positions must be finite");
  }
  if (reference_index < 0 || reference_index >= size()) {
    throw InvalidIndex("ArrayGeometry: reference index out of range");
  }
  for (int a = 0; a < size(); ++a) {
    for (int b = a + 1; b < size(); ++b) {
      if ((positions.col(a) - positions.col(b)).norm() < 1e-12) {
        throw InvalidArgument("ArrayGeometry: duplicate microphone positions");
      }
    }
  }
}

ArrayGeometry ArrayGeometry::ula(int mics, double spacing,
                                 const Eigen::Vector3d& first) {
  if (mics < 2 || spacing <= 0.0) {
    throw InvalidArgument("ArrayGeometry::ula: invalid count or spacing");
  }
  ArrayGeometry g;
  g.positions.resize(3, mics);
  for (int m = 0; m < mics; ++m) {
    g.positions.col(m) = first + Eigen::Vector3d(m * spacing, 0.0, 0.0);
  }
  g.validate();
  return g;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta,
                                 double wavelength) {
  geom.validate();
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw InvalidWavelength("steering_vector: wavelength must be positive");
  }
  if (!std::isfinite(theta)) {
    throw InvalidArgument("steering_vector: theta must be finite");
  }
  const Eigen::Vector3d u(std::sin(theta), std::cos(theta), 0.0);
  const Eigen::Vector3d ref = geom.positions.col(geom.reference_index);
  const double scale = 2.0 * M_PI / wavelength;

  Eigen::VectorXcd d(geom.size());
  for (int m = 0; m < geom.size(); ++m) {
    const double phase = scale * (geom.positions.col(m) - ref).dot(u);
    d(m) = std::polar(1.0, phase);
  }
  d(geom.reference_index) = 1.0;
  return d;
}

Eigen::VectorXcd atf_to_rtf(const Eigen::VectorXcd& h, int reference_index) {
  if (h.size() == 0) throw EmptyInput("atf_to_rtf: empty vector");
  if (reference_index < 0 || reference_index >= h.size()) {
    throw InvalidIndex("atf_to_rtf: reference index out of range");
  }
  const std::complex<double> ref = h(reference_index);
  if (std::abs(ref) < 1e-300) {
    throw ZeroReferenceEntry("atf_to_rtf: reference entry is zero");
  }
  return h / ref;
}

double correlation_coefficient(const Eigen::VectorXcd& a,
                               const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("correlation_coefficient: sizes differ");
  }
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (na <= 0.0 || nb <= 0.0) {
    throw ZeroVector("correlation_coefficient: zero-norm input");
  }
  return std::norm(a.dot(b)) / (na * nb);
}

}  // namespace rbeam
