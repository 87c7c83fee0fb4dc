#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rbeam/array.hpp"
#include "rbeam/hpd.hpp"

namespace rbeam {

// Parametric single-bin model: a desired source, partially active
// interferences with per-source activity fraction tau, spatially white noise,
// and the two correlation coefficients kappa (desired steering vs desired
// ATF) and rho (desired steering vs interference ATFs).
struct InterferenceParams {
  double power = 1.0;        // sigma_j^2
  double tau = 0.5;          // fraction of segments active, in [0, 1]
  double atf_norm_sq = 1.0;  // ||h_j||^2
};

struct AnalyticModel {
  int mics = 12;                  // M
  double desired_power = 1.0;     // sigma_0^2
  double noise_power = 1.0;       // sigma_v^2
  double desired_atf_norm_sq = 12.0;  // ||h_0||^2
  double kappa = 1.0;
  double rho = 0.0;
  std::vector<InterferenceParams> interferences;

  void validate() const;
};

enum class MuRule { Riemannian, Euclidean };
enum class AnalyticMatrixKind { Riemannian, Euclidean, Optimal };

// Effective interference power coefficient in the Riemannian mean:
// ((sigma^2 |h|^2 + sigma_v^2)^tau (sigma_v^2)^(1-tau) - sigma_v^2) / |h|^2.
double mu_riemannian(double sigma_j_sq, double atf_norm_sq, double noise_power,
                     double tau);

// Effective interference power coefficient in the Euclidean mean:
// sigma_j^2 * tau.
double mu_euclidean(double sigma_j_sq, double tau);

// One desired ATF plus the interference ATFs, pairwise orthogonal for the
// closed-form layer.
struct AtfSet {
  Eigen::VectorXcd desired;
  std::vector<Eigen::VectorXcd> interference;
};

// Closed-form mean matrix sigma_0^2 h0 h0^H + sum_j mu_j^2 hj hj^H +
// sigma_v^2 I, with mu chosen by `kind`. The optimal kind zeroes every mu and
// pins the desired coefficient to 1. ATFs must be pairwise orthogonal within
// 1e-10 (relative), and their norms must agree with the model.
HpdMatrix analytic_mean_matrix(const AnalyticModel& model, const AtfSet& atfs,
                               AnalyticMatrixKind kind);

struct SirValues {
  std::vector<double> per_interference;
  double mean = 0.0;
};

// Closed-form per-interference output SIR of the delay-and-sum pattern on the
// parametric mean matrix, plus the mean across interferences.
SirValues analytic_sir(const AnalyticModel& model, MuRule rule);

// Total-SIR variant: a single ratio against the averaged interference power.
double analytic_total_sir(const AnalyticModel& model, MuRule rule);

// The two-segment misalignment family: interference activations shifted by a
// fraction alpha of a segment, producing the matrix pair whose means are
// compared across geometries. Requires exactly two interferences.
std::pair<HpdMatrix, HpdMatrix> misalignment_matrices(const AnalyticModel& model,
                                                      const AtfSet& atfs,
                                                      double alpha);

// Closed-form misalignment coefficients for one interference at offset alpha.
double misalignment_mu_riemannian(double sigma_j_sq, double atf_norm_sq,
                                  double noise_power, double alpha);
double misalignment_mu_euclidean(double sigma_j_sq, double alpha);

// Quadratic-form SIR proxy h0^H g h0 / hj^H g hj.
double sir_bar(const HpdMatrix& g, const Eigen::VectorXcd& h0,
               const Eigen::VectorXcd& hj);

// --- constructions shared by the verification suites ---

// Steering vectors of a half-wavelength ULA at directions chosen so that all
// vectors are exactly orthogonal (sin-theta spacing 2/M). Returns the desired
// direction first; thetas reported alongside. Requires n_interference < M/2.
struct SteeringAtfs {
  AtfSet atfs;
  double theta_desired = 0.0;
  std::vector<double> theta_interference;
};
SteeringAtfs orthogonal_steering_atfs(int mics, int n_interference,
                                      double wavelength, double spacing);

// Random pairwise-orthogonal ATFs (unitary columns scaled to random norms).
AtfSet random_orthogonal_atfs(int mics, int n_interference, std::uint64_t seed);

// Per-segment population correlation matrices Gamma_i = sigma_0^2 h0 h0^H +
// sum_{j active in i} sigma_j^2 hj hj^H + sigma_v^2 I.
// activation[j][i] says whether interference j is active in segment i.
std::vector<HpdMatrix> population_segment_matrices(
    const AnalyticModel& model, const AtfSet& atfs,
    const std::vector<std::vector<bool>>& activation);

// Complex-Gaussian STFT-domain frames drawn from the same model:
// z(l) = s0(l) h0 + sum_j sj(l) hj 1[j active] + v(l), one column per frame,
// segment_frames frames per segment. Deterministic in `seed`.
Eigen::MatrixXcd sample_model_frames(
    const AnalyticModel& model, const AtfSet& atfs,
    const std::vector<std::vector<bool>>& activation, int segment_frames,
    std::uint64_t seed);

}  // namespace rbeam
