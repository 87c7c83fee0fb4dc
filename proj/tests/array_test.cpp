#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rbeam/array.hpp"
#include "rbeam/errors.hpp"

namespace rbeam {
namespace {

TEST(ArrayTest, UlaLaysMicrophonesAlongX) {
  const ArrayGeometry g =
      ArrayGeometry::ula(4, 0.05, Eigen::Vector3d(1.0, 2.0, 3.0));
  EXPECT_EQ(g.size(), 4);
  for (int m = 0; m < 4; ++m) {
    EXPECT_DOUBLE_EQ(g.positions(0, m), 1.0 + 0.05 * m);
    EXPECT_DOUBLE_EQ(g.positions(1, m), 2.0);
    EXPECT_DOUBLE_EQ(g.positions(2, m), 3.0);
  }
  EXPECT_NEAR(g.centroid()(0), 1.075, 1e-15);
}

TEST(ArrayTest, UlaRejectsBadParameters) {
  EXPECT_THROW(ArrayGeometry::ula(1, 0.05), InvalidArgument);
  EXPECT_THROW(ArrayGeometry::ula(4, 0.0), InvalidArgument);
  EXPECT_THROW(ArrayGeometry::ula(4, -0.1), InvalidArgument);
}

TEST(ArrayTest, ValidateRejectsBadReferenceAndDuplicates) {
  ArrayGeometry g = ArrayGeometry::ula(3, 0.1);
  g.reference_index = 3;
  EXPECT_THROW(g.validate(), InvalidIndex);
  g.reference_index = 0;
  g.positions.col(2) = g.positions.col(0);
  EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(ArrayTest, SteeringReferenceEntryOneAndUnitModulus) {
  ArrayGeometry g = ArrayGeometry::ula(6, 0.04);
  g.reference_index = 2;
  const Eigen::VectorXcd d = steering_vector(g, 0.4, 0.08);
  EXPECT_EQ(d.size(), 6);
  EXPECT_EQ(d(2), std::complex<double>(1.0, 0.0));
  for (int m = 0; m < 6; ++m) EXPECT_NEAR(std::abs(d(m)), 1.0, 1e-14);
}

TEST(ArrayTest, SteeringBroadsideIsAllOnes) {
  const ArrayGeometry g = ArrayGeometry::ula(5, 0.04);
  const Eigen::VectorXcd d = steering_vector(g, 0.0, 0.08);
  for (int m = 0; m < 5; ++m) {
    EXPECT_NEAR(std::abs(d(m) - 1.0), 0.0, 1e-14);
  }
}

TEST(ArrayTest, SteeringEndfirePhaseProgression) {
  // At theta = pi/2 the wave travels along the array axis, so each
  // microphone adds 2 pi spacing / lambda of phase relative to the
  // reference.
  const double spacing = 0.03;
  const double wavelength = 0.09;
  const ArrayGeometry g = ArrayGeometry::ula(4, spacing);
  const Eigen::VectorXcd d = steering_vector(g, M_PI / 2.0, wavelength);
  for (int m = 0; m < 4; ++m) {
    const std::complex<double> expected =
        std::polar(1.0, 2.0 * M_PI * m * spacing / wavelength);
    EXPECT_NEAR(std::abs(d(m) - expected), 0.0, 1e-12);
  }
}

TEST(ArrayTest, SteeringRejectsBadWavelength) {
  const ArrayGeometry g = ArrayGeometry::ula(3, 0.05);
  EXPECT_THROW(steering_vector(g, 0.0, 0.0), InvalidWavelength);
  EXPECT_THROW(steering_vector(g, 0.0, -1.0), InvalidWavelength);
}

TEST(ArrayTest, AtfToRtfNormalizesReference) {
  Eigen::VectorXcd h(3);
  h << std::complex<double>(2.0, 0.0), std::complex<double>(0.0, 4.0),
      std::complex<double>(1.0, 1.0);
  const Eigen::VectorXcd rtf = atf_to_rtf(h, 1);
  EXPECT_NEAR(std::abs(rtf(1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rtf(0) - h(0) / h(1)), 0.0, 1e-15);
}

TEST(ArrayTest, AtfToRtfRejectsZeroReference) {
  Eigen::VectorXcd h = Eigen::VectorXcd::Ones(3);
  h(0) = 0.0;
  EXPECT_THROW(atf_to_rtf(h, 0), ZeroReferenceEntry);
}

TEST(ArrayTest, CorrelationCoefficientExtremes) {
  Eigen::VectorXcd a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  EXPECT_NEAR(correlation_coefficient(a, b), 0.0, 1e-15);
  EXPECT_NEAR(correlation_coefficient(a, a), 1.0, 1e-15);
  const Eigen::VectorXcd scaled = std::complex<double>(0.0, 3.0) * a;
  EXPECT_NEAR(correlation_coefficient(a, scaled), 1.0, 1e-15);
}

}  // namespace
}  // namespace rbeam
