#include "rbeam/analytic.hpp"

#include <cmath>

#include "rbeam/rng.hpp"

namespace rbeam {
namespace {

constexpr double kOrthTol = 1e-10;

void check_atfs(const AnalyticModel& model, const AtfSet& atfs) {
  const int m = model.mics;
  if (atfs.desired.size() != m) {
    throw DimensionMismatch("analytic: desired ATF length != mic count");
  }
  if (static_cast<int>(atfs.interference.size()) !=
      static_cast<int>(model.interferences.size())) {
    throw WrongInterferenceCount("analytic: ATF count != interference count");
  }
  std::vector<const Eigen::VectorXcd*> all;
  all.push_back(&atfs.desired);
  for (const auto& h : atfs.interference) {
    if (h.size() != m) {
      throw DimensionMismatch("analytic: interference ATF length != mic count");
    }
    all.push_back(&h);
  }
  for (size_t a = 0; a < all.size(); ++a) {
    for (size_t b = a + 1; b < all.size(); ++b) {
      const double ip = std::abs(all[a]->dot(*all[b]));
      if (ip > kOrthTol * all[a]->norm() * all[b]->norm()) {
        throw AtfsNotOrthogonal("analytic: ATFs are not pairwise orthogonal");
      }
    }
  }
  // The model's stored norms drive the closed forms; insist they describe
  // the vectors actually supplied.
  auto norm_matches = [](double stored, double actual) {
    return std::abs(stored - actual) <= 1e-9 * std::max(1.0, actual);
  };
  if (!norm_matches(model.desired_atf_norm_sq, atfs.desired.squaredNorm())) {
    throw ConfigError("analytic: model desired ATF norm disagrees with vector");
  }
  for (size_t j = 0; j < atfs.interference.size(); ++j) {
    if (!norm_matches(model.interferences[j].atf_norm_sq,
                      atfs.interference[j].squaredNorm())) {
      throw ConfigError("analytic: model ATF norm disagrees with vector");
    }
  }
}

double mu_for(const AnalyticModel& model, const InterferenceParams& p,
              MuRule rule) {
  return rule == MuRule::Riemannian
             ? mu_riemannian(p.power, p.atf_norm_sq, model.noise_power, p.tau)
             : mu_euclidean(p.power, p.tau);
}

// Shared SIR kernel: main-lobe and cross terms of the delay-and-sum pattern
// on the parametric matrix, expressed through kappa and rho.
double sir_expression(double desired_gain, double this_gain,
                      double other_gain_sum, double kappa, double rho,
                      double noise_power) {
  const double num = (desired_gain - this_gain) * kappa +
                     (this_gain - desired_gain) * rho;
  const double den = desired_gain * rho + other_gain_sum * rho +
                     this_gain * kappa + noise_power;
  return 1.0 + num / den;
}

}  // namespace

void AnalyticModel::validate() const {
  if (mics < 1) throw InvalidArgument("AnalyticModel: mics must be >= 1");
  if (!(desired_power > 0.0) || !(noise_power > 0.0) ||
      !(desired_atf_norm_sq > 0.0)) {
    throw InvalidArgument("AnalyticModel: powers and norms must be positive");
  }
  if (!(kappa > 0.0) || kappa > 1.0 || rho < 0.0 || !(rho < kappa)) {
    throw InvalidArgument("AnalyticModel: need 0 <= rho < kappa <= 1");
  }
  for (const auto& p : interferences) {
    if (!(p.power > 0.0) || !(p.atf_norm_sq > 0.0)) {
      throw InvalidArgument("AnalyticModel: interference powers must be positive");
    }
    if (p.tau < 0.0 || p.tau > 1.0) {
      throw InvalidArgument("AnalyticModel: tau must lie in [0, 1]");
    }
  }
}

double mu_riemannian(double sigma_j_sq, double atf_norm_sq, double noise_power,
                     double tau) {
  const double active = sigma_j_sq * atf_norm_sq + noise_power;
  return (std::pow(active, tau) * std::pow(noise_power, 1.0 - tau) -
          noise_power) /
         atf_norm_sq;
}

double mu_euclidean(double sigma_j_sq, double tau) { return sigma_j_sq * tau; }

HpdMatrix analytic_mean_matrix(const AnalyticModel& model, const AtfSet& atfs,
                               AnalyticMatrixKind kind) {
  model.validate();
  check_atfs(model, atfs);
  const int m = model.mics;

  double desired_coeff = model.desired_power;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  if (kind != AnalyticMatrixKind::Optimal) {
    const MuRule rule = kind == AnalyticMatrixKind::Riemannian
                            ? MuRule::Riemannian
                            : MuRule::Euclidean;
    for (size_t j = 0; j < model.interferences.size(); ++j) {
      const double mu_sq = mu_for(model, model.interferences[j], rule);
      out += mu_sq * atfs.interference[j] * atfs.interference[j].adjoint();
    }
  } else {
    desired_coeff = 1.0;
  }
  out += desired_coeff * atfs.desired * atfs.desired.adjoint();
  out += model.noise_power * Eigen::MatrixXcd::Identity(m, m);
  return HpdMatrix(0.5 * (out + out.adjoint()));
}

SirValues analytic_sir(const AnalyticModel& model, MuRule rule) {
  model.validate();
  const double desired_gain = model.desired_power * model.desired_atf_norm_sq;

  std::vector<double> gains(model.interferences.size());
  for (size_t j = 0; j < model.interferences.size(); ++j) {
    gains[j] =
        mu_for(model, model.interferences[j], rule) *
        model.interferences[j].atf_norm_sq;
  }

  SirValues out;
  out.per_interference.resize(gains.size());
  double acc = 0.0;
  for (size_t j = 0; j < gains.size(); ++j) {
    double others = 0.0;
    for (size_t l = 0; l < gains.size(); ++l) {
      if (l != j) others += gains[l];
    }
    out.per_interference[j] = sir_expression(desired_gain, gains[j], others,
                                             model.kappa, model.rho,
                                             model.noise_power);
    acc += out.per_interference[j];
  }
  out.mean = gains.empty() ? 0.0 : acc / static_cast<double>(gains.size());
  return out;
}

double analytic_total_sir(const AnalyticModel& model, MuRule rule) {
  model.validate();
  if (model.interferences.empty()) {
    throw EmptyInput("analytic_total_sir: no interferences in model");
  }
  const double desired_gain = model.desired_power * model.desired_atf_norm_sq;
  const double n_i = static_cast<double>(model.interferences.size());

  double gain_sum = 0.0;
  for (const auto& p : model.interferences) {
    gain_sum += mu_for(model, p, rule) * p.atf_norm_sq;
  }
  const double avg_gain = gain_sum / n_i;
  const double others = (n_i - 1.0) / n_i * gain_sum;
  return sir_expression(desired_gain, avg_gain, others, model.kappa, model.rho,
                        model.noise_power);
}

std::pair<HpdMatrix, HpdMatrix> misalignment_matrices(
    const AnalyticModel& model, const AtfSet& atfs, double alpha) {
  model.validate();
  if (model.interferences.size() != 2) {
    throw WrongInterferenceCount(
        "misalignment_matrices: exactly two interferences required");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw InvalidArgument("misalignment_matrices: alpha must lie in [0, 1]");
  }
  check_atfs(model, atfs);
  const int m = model.mics;
  const double a_sq = alpha * alpha;
  const double b_sq = (1.0 - alpha) * (1.0 - alpha);

  const Eigen::MatrixXcd desired =
      model.desired_power * atfs.desired * atfs.desired.adjoint();
  const Eigen::MatrixXcd r1 =
      atfs.interference[0] * atfs.interference[0].adjoint();
  const Eigen::MatrixXcd r2 =
      atfs.interference[1] * atfs.interference[1].adjoint();
  const Eigen::MatrixXcd noise =
      model.noise_power * Eigen::MatrixXcd::Identity(m, m);
  const double p1 = model.interferences[0].power;
  const double p2 = model.interferences[1].power;

  Eigen::MatrixXcd g1 = desired + a_sq * p1 * r1 + b_sq * p2 * r2 + noise;
  Eigen::MatrixXcd g2 = desired + b_sq * p1 * r1 + a_sq * p2 * r2 + noise;
  return {HpdMatrix(0.5 * (g1 + g1.adjoint())),
          HpdMatrix(0.5 * (g2 + g2.adjoint()))};
}

double misalignment_mu_riemannian(double sigma_j_sq, double atf_norm_sq,
                                  double noise_power, double alpha) {
  const double a = alpha * alpha * sigma_j_sq * atf_norm_sq + noise_power;
  const double b =
      (1.0 - alpha) * (1.0 - alpha) * sigma_j_sq * atf_norm_sq + noise_power;
  return (std::sqrt(a) * std::sqrt(b) - noise_power) / atf_norm_sq;
}

double misalignment_mu_euclidean(double sigma_j_sq, double alpha) {
  return 0.5 * sigma_j_sq *
         (alpha * alpha + (1.0 - alpha) * (1.0 - alpha));
}

double sir_bar(const HpdMatrix& g, const Eigen::VectorXcd& h0,
               const Eigen::VectorXcd& hj) {
  if (h0.size() != g.dim() || hj.size() != g.dim()) {
    throw DimensionMismatch("sir_bar: vector length != matrix dimension");
  }
  const double num = (h0.adjoint() * g.entries() * h0)(0).real();
  const double den = (hj.adjoint() * g.entries() * hj)(0).real();
  return num / den;
}

SteeringAtfs orthogonal_steering_atfs(int mics, int n_interference,
                                      double wavelength, double spacing) {
  if (n_interference < 1 || 2 * n_interference >= mics) {
    throw InvalidArgument(
        "orthogonal_steering_atfs: need 1 <= n_interference < mics/2");
  }
  const ArrayGeometry geom = ArrayGeometry::ula(mics, spacing);
  // For sin-theta spacing k * lambda / (M * delta) the steering vectors are
  // exactly orthogonal; alternate signs keep angles near broadside.
  const double unit = wavelength / (mics * spacing);

  SteeringAtfs out;
  out.theta_desired = 0.0;
  out.atfs.desired = steering_vector(geom, 0.0, wavelength);
  for (int j = 1; j <= n_interference; ++j) {
    const int k = (j + 1) / 2;
    const double sin_theta = (j % 2 == 1 ? 1.0 : -1.0) * 2.0 * k * unit;
    if (std::abs(sin_theta) >= 1.0) {
      throw InvalidArgument("orthogonal_steering_atfs: direction off the arc");
    }
    const double theta = std::asin(sin_theta);
    out.theta_interference.push_back(theta);
    out.atfs.interference.push_back(steering_vector(geom, theta, wavelength));
  }
  return out;
}

AtfSet random_orthogonal_atfs(int mics, int n_interference,
                              std::uint64_t seed) {
  if (n_interference + 1 > mics) {
    throw InvalidArgument("random_orthogonal_atfs: too many sources for M");
  }
  GaussianStream gs(seed);
  Eigen::MatrixXcd ginibre(mics, n_interference + 1);
  for (int c = 0; c < ginibre.cols(); ++c) {
    for (int r = 0; r < mics; ++r) ginibre(r, c) = gs.next_complex();
  }
  const Eigen::MatrixXcd q =
      Eigen::HouseholderQR<Eigen::MatrixXcd>(ginibre).householderQ() *
      Eigen::MatrixXcd::Identity(mics, n_interference + 1);

  // Random norms in [0.5, 2.5] keep the constructions well conditioned.
  auto scale = [&gs]() { return 0.5 + 2.0 * (0.5 + 0.5 * std::tanh(gs.next())); };
  AtfSet out;
  out.desired = q.col(0) * scale();
  for (int j = 0; j < n_interference; ++j) {
    out.interference.push_back(q.col(j + 1) * scale());
  }
  return out;
}

std::vector<HpdMatrix> population_segment_matrices(
    const AnalyticModel& model, const AtfSet& atfs,
    const std::vector<std::vector<bool>>& activation) {
  model.validate();
  check_atfs(model, atfs);
  if (activation.size() != model.interferences.size()) {
    throw WrongInterferenceCount(
        "population_segment_matrices: activation rows != interference count");
  }
  if (activation.empty()) {
    throw EmptyInput("population_segment_matrices: no interferences");
  }
  const size_t segments = activation.front().size();
  for (const auto& row : activation) {
    if (row.size() != segments || segments == 0) {
      throw InvalidArgument(
          "population_segment_matrices: ragged or empty activation map");
    }
  }

  const int m = model.mics;
  const Eigen::MatrixXcd base =
      model.desired_power * atfs.desired * atfs.desired.adjoint() +
      model.noise_power * Eigen::MatrixXcd::Identity(m, m);

  std::vector<HpdMatrix> out;
  out.reserve(segments);
  for (size_t i = 0; i < segments; ++i) {
    Eigen::MatrixXcd g = base;
    for (size_t j = 0; j < activation.size(); ++j) {
      if (activation[j][i]) {
        g += model.interferences[j].power * atfs.interference[j] *
             atfs.interference[j].adjoint();
      }
    }
    out.emplace_back(0.5 * (g + g.adjoint()));
  }
  return out;
}

Eigen::MatrixXcd sample_model_frames(
    const AnalyticModel& model, const AtfSet& atfs,
    const std::vector<std::vector<bool>>& activation, int segment_frames,
    std::uint64_t seed) {
  model.validate();
  check_atfs(model, atfs);
  if (segment_frames < 1) {
    throw InvalidArgument("sample_model_frames: segment_frames must be >= 1");
  }
  if (activation.size() != model.interferences.size()) {
    throw WrongInterferenceCount(
        "sample_model_frames: activation rows != interference count");
  }
  const size_t segments = activation.empty() ? 0 : activation.front().size();
  for (const auto& row : activation) {
    if (row.size() != segments) {
      throw InvalidArgument("sample_model_frames: ragged activation map");
    }
  }
  if (segments == 0) {
    throw EmptyInput("sample_model_frames: empty activation map");
  }

  const int m = model.mics;
  const int frames = static_cast<int>(segments) * segment_frames;
  GaussianStream gs(seed);
  Eigen::MatrixXcd z(m, frames);
  for (int l = 0; l < frames; ++l) {
    const size_t seg = static_cast<size_t>(l / segment_frames);
    Eigen::VectorXcd col =
        atfs.desired * gs.next_complex(model.desired_power);
    for (size_t j = 0; j < activation.size(); ++j) {
      // Draw even when inactive so a source's stream does not depend on the
      // activation pattern of the others.
      const std::complex<double> s =
          gs.next_complex(model.interferences[j].power);
      if (activation[j][seg]) col += atfs.interference[j] * s;
    }
    for (int r = 0; r < m; ++r) col(r) += gs.next_complex(model.noise_power);
    z.col(l) = col;
  }
  return z;
}

}  // namespace rbeam
