#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rbeam/analytic.hpp"
#include "rbeam/errors.hpp"
#include "rbeam/hpd.hpp"
#include "rbeam/manifold.hpp"

namespace rbeam {
namespace {

// The two-interference reference model: 12 microphones, unit powers, unit
// noise, half duty cycle, orthogonal unit-gain steering ATFs.
AnalyticModel reference_model() {
  AnalyticModel model;
  model.mics = 12;
  model.desired_power = 1.0;
  model.noise_power = 1.0;
  model.desired_atf_norm_sq = 12.0;
  model.kappa = 1.0;
  model.rho = 0.0;
  InterferenceParams p;
  p.power = 1.0;
  p.tau = 0.5;
  p.atf_norm_sq = 12.0;
  model.interferences = {p, p};
  return model;
}

double quad(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& m) {
  return (v.adjoint() * m * v)(0).real();
}

TEST(AnalyticTest, MuRiemannianWorkedValue) {
  // sigma^2 = |h|^2 = sigma_v^2 = 1, tau = 1/2:
  // ((1 + 1)^0.5 * 1^0.5 - 1) / 1 = sqrt(2) - 1.
  EXPECT_NEAR(mu_riemannian(1.0, 1.0, 1.0, 0.5), std::sqrt(2.0) - 1.0, 1e-15);
}

TEST(AnalyticTest, MuEuclideanIsPowerTimesDuty) {
  EXPECT_DOUBLE_EQ(mu_euclidean(1.0, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(mu_euclidean(3.0, 0.25), 0.75);
}

TEST(AnalyticTest, MuRulesAgreeAtDutyEndpoints) {
  EXPECT_NEAR(mu_riemannian(2.0, 5.0, 0.3, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(mu_euclidean(2.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(mu_riemannian(2.0, 5.0, 0.3, 1.0), 2.0, 1e-12);
  EXPECT_NEAR(mu_euclidean(2.0, 1.0), 2.0, 1e-15);
}

TEST(AnalyticTest, MuRiemannianBelowEuclideanInside) {
  for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    EXPECT_LT(mu_riemannian(1.5, 8.0, 0.2, tau), mu_euclidean(1.5, tau));
  }
}

TEST(AnalyticTest, ReferenceModelSirValues) {
  const AnalyticModel model = reference_model();
  const SirValues r = analytic_sir(model, MuRule::Riemannian);
  const SirValues e = analytic_sir(model, MuRule::Euclidean);
  ASSERT_EQ(r.per_interference.size(), 2u);
  EXPECT_NEAR(r.per_interference[0], std::sqrt(13.0), 1e-12);
  EXPECT_NEAR(r.per_interference[1], std::sqrt(13.0), 1e-12);
  EXPECT_NEAR(r.mean, std::sqrt(13.0), 1e-12);
  EXPECT_NEAR(e.mean, 26.0 / 14.0, 1e-12);
  EXPECT_GT(analytic_total_sir(model, MuRule::Riemannian),
            analytic_total_sir(model, MuRule::Euclidean));
}

TEST(AnalyticTest, OrthogonalSteeringAtfsAreOrthogonal) {
  const double wavelength = 0.0878;
  const double spacing = 0.0436;
  const SteeringAtfs sa = orthogonal_steering_atfs(12, 2, wavelength, spacing);
  EXPECT_DOUBLE_EQ(sa.theta_desired, 0.0);
  ASSERT_EQ(sa.atfs.interference.size(), 2u);
  EXPECT_NEAR(sa.atfs.desired.squaredNorm(), 12.0, 1e-12);
  EXPECT_NEAR(std::abs(sa.atfs.desired.dot(sa.atfs.interference[0])), 0.0,
              1e-9);
  EXPECT_NEAR(std::abs(sa.atfs.interference[0].dot(sa.atfs.interference[1])),
              0.0, 1e-9);
}

TEST(AnalyticTest, OrthogonalSteeringRejectsTooManyInterferences) {
  EXPECT_THROW(orthogonal_steering_atfs(12, 6, 0.0878, 0.0436),
               InvalidArgument);
}

TEST(AnalyticTest, RandomOrthogonalAtfsDeterministicAndOrthogonal) {
  const AtfSet a = random_orthogonal_atfs(8, 3, 42);
  const AtfSet b = random_orthogonal_atfs(8, 3, 42);
  EXPECT_EQ((a.desired - b.desired).norm(), 0.0);
  for (size_t j = 0; j < a.interference.size(); ++j) {
    EXPECT_EQ((a.interference[j] - b.interference[j]).norm(), 0.0);
    EXPECT_NEAR(std::abs(a.desired.dot(a.interference[j])), 0.0, 1e-10);
  }
}

TEST(AnalyticTest, OptimalMatrixPinsDesiredCoefficient) {
  AnalyticModel model = reference_model();
  model.desired_power = 4.0;  // must not leak into the optimal matrix
  const SteeringAtfs sa = orthogonal_steering_atfs(12, 2, 0.0878, 0.0436);
  const HpdMatrix opt =
      analytic_mean_matrix(model, sa.atfs, AnalyticMatrixKind::Optimal);
  const Eigen::MatrixXcd expected =
      sa.atfs.desired * sa.atfs.desired.adjoint() +
      Eigen::MatrixXcd::Identity(12, 12);
  EXPECT_LT((opt.entries() - expected).norm(), 1e-12 * expected.norm());
}

TEST(AnalyticTest, MeanMatrixCarriesMuCoefficients) {
  const AnalyticModel model = reference_model();
  const SteeringAtfs sa = orthogonal_steering_atfs(12, 2, 0.0878, 0.0436);
  const HpdMatrix r =
      analytic_mean_matrix(model, sa.atfs, AnalyticMatrixKind::Riemannian);
  // Quadratic form along an interference ATF isolates its coefficient plus
  // the noise floor (orthogonality kills the cross terms).
  const Eigen::VectorXcd& h1 = sa.atfs.interference[0];
  const double coeff =
      (quad(h1, r.entries()) / h1.squaredNorm() - model.noise_power) /
      h1.squaredNorm();
  EXPECT_NEAR(coeff, mu_riemannian(1.0, 12.0, 1.0, 0.5), 1e-12);
}

TEST(AnalyticTest, AtfChecksReportMismatches) {
  const AnalyticModel model = reference_model();
  SteeringAtfs sa = orthogonal_steering_atfs(12, 2, 0.0878, 0.0436);

  AtfSet skewed = sa.atfs;
  skewed.interference[0] += 0.1 * skewed.desired;
  EXPECT_THROW(
      analytic_mean_matrix(model, skewed, AnalyticMatrixKind::Riemannian),
      AtfsNotOrthogonal);

  AtfSet rescaled = sa.atfs;
  rescaled.interference[0] *= 2.0;  // norm no longer matches the model
  EXPECT_THROW(
      analytic_mean_matrix(model, rescaled, AnalyticMatrixKind::Riemannian),
      ConfigError);

  AtfSet missing = sa.atfs;
  missing.interference.pop_back();
  EXPECT_THROW(
      analytic_mean_matrix(model, missing, AnalyticMatrixKind::Riemannian),
      WrongInterferenceCount);
}

TEST(AnalyticTest, ValidateRejectsBadModels) {
  AnalyticModel m = reference_model();
  m.interferences[0].tau = 1.5;
  EXPECT_THROW(m.validate(), InvalidArgument);
  m = reference_model();
  m.rho = 1.0;  // needs rho < kappa
  EXPECT_THROW(m.validate(), InvalidArgument);
  m = reference_model();
  m.noise_power = 0.0;
  EXPECT_THROW(m.validate(), InvalidArgument);
}

TEST(AnalyticTest, PopulationSegmentMatricesMatchManualAssembly) {
  const AnalyticModel model = reference_model();
  const SteeringAtfs sa = orthogonal_steering_atfs(12, 2, 0.0878, 0.0436);
  const std::vector<std::vector<bool>> activation = {{true, false},
                                                     {false, true}};
  const std::vector<HpdMatrix> segs =
      population_segment_matrices(model, sa.atfs, activation);
  ASSERT_EQ(segs.size(), 2u);
  const Eigen::MatrixXcd expected0 =
      sa.atfs.desired * sa.atfs.desired.adjoint() +
      sa.atfs.interference[0] * sa.atfs.interference[0].adjoint() +
      Eigen::MatrixXcd::Identity(12, 12);
  EXPECT_LT((segs[0].entries() - expected0).norm(), 1e-12 * expected0.norm());
}

TEST(AnalyticTest, MisalignmentPairSwapsUnderAlphaReflection) {
  const AnalyticModel model = reference_model();
  const SteeringAtfs sa = orthogonal_steering_atfs(12, 2, 0.0878, 0.0436);
  const auto at = misalignment_matrices(model, sa.atfs, 0.3);
  const auto reflected = misalignment_matrices(model, sa.atfs, 0.7);
  EXPECT_LT((at.first.entries() - reflected.second.entries()).norm(), 1e-12);
  EXPECT_LT((at.second.entries() - reflected.first.entries()).norm(), 1e-12);

  const auto half = misalignment_matrices(model, sa.atfs, 0.5);
  EXPECT_EQ((half.first.entries() - half.second.entries()).norm(), 0.0);
}

TEST(AnalyticTest, MisalignmentRequiresTwoInterferences) {
  AnalyticModel model = reference_model();
  model.interferences.pop_back();
  const AtfSet atfs = random_orthogonal_atfs(12, 1, 3);
  // Align stored norms with the drawn vectors to isolate the count check.
  AnalyticModel fixed = model;
  fixed.desired_atf_norm_sq = atfs.desired.squaredNorm();
  fixed.interferences[0].atf_norm_sq = atfs.interference[0].squaredNorm();
  EXPECT_THROW(misalignment_matrices(fixed, atfs, 0.3),
               WrongInterferenceCount);
}

TEST(AnalyticTest, MisalignmentMuMatchesMatrixCoefficient) {
  const AnalyticModel model = reference_model();
  const SteeringAtfs sa = orthogonal_steering_atfs(12, 2, 0.0878, 0.0436);
  const double alpha = 0.2;
  const auto pair = misalignment_matrices(model, sa.atfs, alpha);
  const HpdMatrix mean =
      karcher_mean({pair.first, pair.second}, MeanConfig{1e-12, 300}).mean;
  const Eigen::VectorXcd& h1 = sa.atfs.interference[0];
  const double coeff =
      (quad(h1, mean.entries()) / h1.squaredNorm() - model.noise_power) /
      h1.squaredNorm();
  EXPECT_NEAR(coeff, misalignment_mu_riemannian(1.0, 12.0, 1.0, alpha), 1e-9);
  EXPECT_NEAR(misalignment_mu_euclidean(1.0, alpha),
              0.5 * (alpha * alpha + (1.0 - alpha) * (1.0 - alpha)), 1e-15);
}

TEST(AnalyticTest, SampledFramesConvergeToPopulationMatrix) {
  AnalyticModel model = reference_model();
  model.mics = 4;
  model.desired_atf_norm_sq = 4.0;
  for (auto& p : model.interferences) p.atf_norm_sq = 4.0;
  const AtfSet raw = random_orthogonal_atfs(4, 2, 9);
  AtfSet atfs = raw;
  atfs.desired *= 2.0 / atfs.desired.norm();
  for (auto& h : atfs.interference) h *= 2.0 / h.norm();

  const std::vector<std::vector<bool>> activation = {{true}, {true}};
  const int frames = 40000;
  const Eigen::MatrixXcd z =
      sample_model_frames(model, atfs, activation, frames, 77);
  ASSERT_EQ(z.cols(), frames);
  const Eigen::MatrixXcd sample = z * z.adjoint() / double(frames);
  const HpdMatrix pop =
      population_segment_matrices(model, atfs, activation).front();
  EXPECT_LT((sample - pop.entries()).norm(), 0.1 * pop.entries().norm());

  const Eigen::MatrixXcd again =
      sample_model_frames(model, atfs, activation, 64, 77);
  const Eigen::MatrixXcd once =
      sample_model_frames(model, atfs, activation, 64, 77);
  EXPECT_EQ((again - once).norm(), 0.0);
}

}  // namespace
}  // namespace rbeam
