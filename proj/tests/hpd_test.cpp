#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rbeam/errors.hpp"
#include "rbeam/hpd.hpp"

namespace rbeam {
namespace {

using Cd = std::complex<double>;

// Small fixed HPD matrix with off-diagonal coupling.
Eigen::MatrixXcd sample_hpd3() {
  Eigen::MatrixXcd a(3, 3);
  a << Cd(4.0, 0.0), Cd(1.0, 0.5), Cd(0.2, -0.3),
       Cd(1.0, -0.5), Cd(3.0, 0.0), Cd(0.4, 0.1),
       Cd(0.2, 0.3), Cd(0.4, -0.1), Cd(2.0, 0.0);
  return a;
}

TEST(HpdTest, RejectsEmptyAndNonSquare) {
  EXPECT_THROW(HpdMatrix(Eigen::MatrixXcd(0, 0)), EmptyInput);
  EXPECT_THROW(HpdMatrix(Eigen::MatrixXcd::Ones(2, 3)), DimensionMismatch);
}

TEST(HpdTest, RejectsNonHermitian) {
  Eigen::MatrixXcd a = sample_hpd3();
  a(0, 1) = Cd(5.0, 0.0);
  EXPECT_THROW(HpdMatrix{a}, NotHermitian);
}

TEST(HpdTest, RejectsIndefinite) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
  a(2, 2) = -1.0;
  EXPECT_THROW(HpdMatrix{a}, NotPositiveDefinite);
  EXPECT_THROW(HpdMatrix(Eigen::MatrixXcd::Zero(2, 2)), NotPositiveDefinite);
}

TEST(HpdTest, RejectsNegativeLoading) {
  EXPECT_THROW(HpdMatrix(Eigen::MatrixXcd::Identity(2, 2), -1e-3),
               InvalidArgument);
}

TEST(HpdTest, SymmetrizesWithinTolerance) {
  Eigen::MatrixXcd a = sample_hpd3();
  a(0, 1) += Cd(0.0, 1e-14);
  const HpdMatrix g(a);
  EXPECT_NEAR((g.entries() - g.entries().adjoint()).norm(), 0.0, 1e-18);
}

TEST(HpdTest, DiagonalLoadingAddsToDiagonal) {
  const HpdMatrix g(sample_hpd3(), 0.5);
  const Eigen::MatrixXcd expected =
      sample_hpd3() + 0.5 * Eigen::MatrixXcd::Identity(3, 3);
  EXPECT_LT((g.entries() - expected).norm(), 1e-15);
}

TEST(HpdTest, IdentityFactory) {
  const HpdMatrix g = HpdMatrix::identity(4);
  EXPECT_EQ(g.dim(), 4);
  EXPECT_LT((g.entries() - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-15);
}

TEST(HpdTest, SqrtSquaresBack) {
  const HpdMatrix g(sample_hpd3());
  const HpdMatrix s = hpd_sqrt(g);
  EXPECT_LT((s.entries() * s.entries() - g.entries()).norm(),
            1e-12 * g.entries().norm());
}

TEST(HpdTest, InvSqrtWhitens) {
  const HpdMatrix g(sample_hpd3());
  const Eigen::MatrixXcd w = hpd_inv_sqrt(g).entries();
  EXPECT_LT((w * g.entries() * w - Eigen::MatrixXcd::Identity(3, 3)).norm(),
            1e-12);
}

TEST(HpdTest, LogExpRoundTrip) {
  const HpdMatrix g(sample_hpd3());
  const HpdMatrix back = exp_of_tangent(hpd_log(g));
  EXPECT_LT((back.entries() - g.entries()).norm(), 1e-12 * g.entries().norm());
}

TEST(HpdTest, LogOfDiagonalIsScalarLog) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = std::exp(1.0);
  a(1, 1) = std::exp(2.0);
  const TangentMatrix t = hpd_log(HpdMatrix(a));
  EXPECT_NEAR(t.entries()(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(t.entries()(1, 1).real(), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(t.entries()(0, 1)), 0.0, 1e-14);
}

TEST(HpdTest, ExpOfZeroTangentIsIdentity) {
  const HpdMatrix g = exp_of_tangent(TangentMatrix::zero(3));
  EXPECT_LT((g.entries() - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-15);
}

TEST(HpdTest, TangentRejectsNonHermitian) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(TangentMatrix{a}, NotHermitian);
}

TEST(HpdTest, EigenvaluesAscendingAndMatchDiagonal) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = 5.0;
  a(1, 1) = 1.0;
  a(2, 2) = 3.0;
  const Eigen::VectorXd eigs = hpd_eigenvalues(HpdMatrix(a));
  EXPECT_NEAR(eigs(0), 1.0, 1e-14);
  EXPECT_NEAR(eigs(1), 3.0, 1e-14);
  EXPECT_NEAR(eigs(2), 5.0, 1e-14);
}

}  // namespace
}  // namespace rbeam
