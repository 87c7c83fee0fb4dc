#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rbeam/beamformers.hpp"
#include "rbeam/errors.hpp"
#include "rbeam/metrics.hpp"

namespace rbeam {
namespace {

BeamPattern make_pattern(const Eigen::VectorXd& thetas,
                         const Eigen::VectorXd& power) {
  BeamPattern p;
  p.thetas = thetas;
  p.power = power;
  return p;
}

TEST(MetricsTest, ToDbMatchesLog10) {
  EXPECT_DOUBLE_EQ(to_db(1.0), 0.0);
  EXPECT_DOUBLE_EQ(to_db(10.0), 10.0);
  EXPECT_DOUBLE_EQ(to_db(100.0), 20.0);
  EXPECT_NEAR(to_db(2.0), 3.0103, 1e-4);
}

TEST(MetricsTest, OutputSirFlatPatternIsUnity) {
  const BeamPattern p =
      make_pattern(doa_grid(19), Eigen::VectorXd::Constant(19, 3.0));
  const OutputSir sir = output_sir(p, 0.0, {-0.5, 0.7});
  ASSERT_EQ(sir.per_interference.size(), 2u);
  EXPECT_DOUBLE_EQ(sir.per_interference[0], 1.0);
  EXPECT_DOUBLE_EQ(sir.per_interference[1], 1.0);
  EXPECT_DOUBLE_EQ(sir.mean, 1.0);
  EXPECT_FALSE(sir.has_infinite);
}

TEST(MetricsTest, OutputSirUsesNearestGridPoint) {
  Eigen::VectorXd power = Eigen::VectorXd::Ones(19);
  power(9) = 8.0;   // theta = 0
  power(13) = 2.0;  // theta = 40 degrees
  const BeamPattern p = make_pattern(doa_grid(19), power);
  // Both query angles sit off-grid; the lookup snaps to the nearest node.
  const double off_d = 2.0 * M_PI / 180.0;
  const double off_i = 38.5 * M_PI / 180.0;
  const OutputSir sir = output_sir(p, off_d, {off_i});
  EXPECT_DOUBLE_EQ(sir.per_interference[0], 4.0);
  EXPECT_DOUBLE_EQ(sir.mean, 4.0);
}

TEST(MetricsTest, OutputSirFlagsVanishingDenominator) {
  Eigen::VectorXd power = Eigen::VectorXd::Ones(19);
  power(2) = 0.0;
  const BeamPattern p = make_pattern(doa_grid(19), power);
  const OutputSir sir = output_sir(p, 0.0, {p.thetas(2), p.thetas(5)});
  EXPECT_TRUE(sir.has_infinite);
  EXPECT_TRUE(std::isinf(sir.per_interference[0]));
  EXPECT_DOUBLE_EQ(sir.per_interference[1], 1.0);
  EXPECT_TRUE(std::isinf(sir.mean));
}

TEST(MetricsTest, OutputSirRejectsBadInputs) {
  BeamPattern empty;
  EXPECT_THROW(output_sir(empty, 0.0, {0.1}), EmptyGrid);
  const BeamPattern p =
      make_pattern(doa_grid(5), Eigen::VectorXd::Ones(5));
  EXPECT_THROW(output_sir(p, 0.0, {}), EmptyInput);
}

TEST(MetricsTest, PolarGridAndArrivalAngleMap) {
  const Eigen::VectorXd psis = polar_angles(91);
  EXPECT_EQ(psis.size(), 91);
  EXPECT_NEAR(psis(0), 0.0, 1e-15);
  EXPECT_NEAR(psis(90), M_PI, 1e-15);
  EXPECT_THROW(polar_angles(1), EmptyGrid);

  // Broadside arrival (theta = 0) sits at polar angle pi/2; the array axis
  // endpoints map to the endfire arrivals +-pi/2.
  Eigen::VectorXd probe(3);
  probe << 0.0, M_PI / 2.0, M_PI;
  const Eigen::VectorXd thetas = arrival_angles_for_polar(probe);
  EXPECT_NEAR(thetas(0), M_PI / 2.0, 1e-12);
  EXPECT_NEAR(thetas(1), 0.0, 1e-12);
  EXPECT_NEAR(thetas(2), -M_PI / 2.0, 1e-12);
}

TEST(MetricsTest, DirectivityOfIsotropicPatternIsUnity) {
  const Eigen::VectorXd psis = polar_angles(721);
  const BeamPattern p = make_pattern(psis, Eigen::VectorXd::Ones(721));
  EXPECT_NEAR(directivity(p, 0.3), 1.0, 1e-4);
}

TEST(MetricsTest, DirectivityOfNarrowLobeMatchesClosedForm) {
  // Top-hat lobe of width w toward broadside: D approaches 2 / w.
  const double width = 10.0 * M_PI / 180.0;
  const Eigen::VectorXd psis = polar_angles(721);
  Eigen::VectorXd power = Eigen::VectorXd::Zero(721);
  for (Eigen::Index i = 0; i < psis.size(); ++i) {
    if (std::abs(psis(i) - M_PI / 2.0) <= width / 2.0 + 1e-12) {
      power(i) = 1.0;
    }
  }
  const BeamPattern p = make_pattern(psis, power);
  const double d = directivity(p, 0.0);
  EXPECT_NEAR(d, 2.0 / width, 0.05 * 2.0 / width);
}

TEST(MetricsTest, DirectivityRejectsCoarseOrPartialGrids) {
  const Eigen::VectorXd coarse = polar_angles(89);
  EXPECT_THROW(
      directivity(make_pattern(coarse, Eigen::VectorXd::Ones(89)), 0.0),
      GridTooCoarse);
  const Eigen::VectorXd partial = Eigen::VectorXd::LinSpaced(100, 0.0, 3.0);
  EXPECT_THROW(
      directivity(make_pattern(partial, Eigen::VectorXd::Ones(100)), 0.0),
      InvalidArgument);
}

}  // namespace
}  // namespace rbeam
