#include "rbeam/metrics.hpp"

#include <cmath>
#include <limits>

#include "rbeam/errors.hpp"

namespace rbeam {

namespace {

Eigen::Index nearest_index(const Eigen::VectorXd& thetas, double theta) {
  Eigen::Index best = 0;
  (thetas.array() - theta).abs().minCoeff(&best);
  return best;
}

}  // namespace

OutputSir output_sir(const BeamPattern& pattern, double theta_d,
                     const std::vector<double>& theta_interference) {
  if (pattern.thetas.size() == 0) {
    throw EmptyGrid("empty pattern");
  }
  if (theta_interference.empty()) {
    throw EmptyInput("no interference directions");
  }
  const double numerator = pattern.power(nearest_index(pattern.thetas, theta_d));

  OutputSir out;
  out.per_interference.reserve(theta_interference.size());
  double sum = 0.0;
  for (double theta_i : theta_interference) {
    const double denominator =
        pattern.power(nearest_index(pattern.thetas, theta_i));
    double ratio;
    if (denominator < 1e-300) {
      ratio = std::numeric_limits<double>::infinity();
      out.has_infinite = true;
    } else {
      ratio = numerator / denominator;
    }
    out.per_interference.push_back(ratio);
    sum += ratio;
  }
  out.mean = sum / static_cast<double>(theta_interference.size());
  return out;
}

Eigen::VectorXd polar_angles(int points) {
  if (points < 2) {
    throw EmptyGrid("polar grid needs at least two points");
  }
  return Eigen::VectorXd::LinSpaced(points, 0.0, M_PI);
}

Eigen::VectorXd arrival_angles_for_polar(const Eigen::VectorXd& psis) {
  return psis.array().cos().asin();
}

double directivity(const BeamPattern& polar_pattern, double theta_d) {
  const Eigen::VectorXd& psis = polar_pattern.thetas;
  const Eigen::Index n = psis.size();
  if (n < 90) {
    throw GridTooCoarse("directivity needs at least 90 polar grid points");
  }
  if (psis(0) > 1e-6 || psis(n - 1) < M_PI - 1e-6) {
    throw InvalidArgument("directivity pattern must cover [0, pi]");
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (psis(i) <= psis(i - 1)) {
      throw InvalidArgument("polar grid must be strictly increasing");
    }
  }

  const double psi_d = M_PI / 2.0 - theta_d;
  const double numerator = polar_pattern.power(nearest_index(psis, psi_d));

  const Eigen::ArrayXd weighted =
      polar_pattern.power.array() * psis.array().sin();
  double integral = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    integral += 0.5 * (weighted(i) + weighted(i - 1)) * (psis(i) - psis(i - 1));
  }
  return numerator / (0.5 * integral);
}

}  // namespace rbeam
