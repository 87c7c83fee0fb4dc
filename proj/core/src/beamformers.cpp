#include "rbeam/beamformers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rbeam/errors.hpp"

namespace rbeam {

namespace {

// Columns of the eigenvector matrix that belong to the subspace_dim largest
// eigenvalues. SelfAdjointEigenSolver sorts ascending, so take the tail.
Eigen::MatrixXcd leading_eigenvectors(const Eigen::MatrixXcd& hermitian,
                                      int subspace_dim) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
  if (es.info() != Eigen::Success) {
    throw NonFiniteEigenvalue("eigendecomposition failed");
  }
  const int m = static_cast<int>(hermitian.rows());
  return es.eigenvectors().rightCols(std::min(subspace_dim, m));
}

void check_subspace_dim(int subspace_dim, int m) {
  if (subspace_dim < 1 || subspace_dim > m) {
    throw InvalidSubspaceDim("subspace dimension " +
                             std::to_string(subspace_dim) +
                             " out of range for " + std::to_string(m) +
                             " channels");
  }
}

}  // namespace

Eigen::VectorXd doa_grid(int points, double lo, double hi) {
  if (points < 2) {
    throw EmptyGrid("direction grid needs at least two points");
  }
  if (!(hi > lo)) {
    throw InvalidArgument("direction grid bounds must satisfy lo < hi");
  }
  return Eigen::VectorXd::LinSpaced(points, lo, hi);
}

int estimate_subspace_dim(const HpdMatrix& gamma, SubspaceRule rule,
                          int oracle_dim) {
  if (rule == SubspaceRule::Oracle) {
    if (oracle_dim < 1 || oracle_dim > static_cast<int>(gamma.dim())) {
      throw InvalidSubspaceDim("oracle subspace dimension out of range");
    }
    return oracle_dim;
  }
  const Eigen::VectorXd eigs = hpd_eigenvalues(gamma);
  const double mean = eigs.mean();
  int count = 0;
  if (rule == SubspaceRule::MeanMatrix) {
    const double var = (eigs.array() - mean).square().mean();
    const double threshold = mean + std::sqrt(var);
    count = static_cast<int>((eigs.array() > threshold).count());
  } else {
    count = static_cast<int>((eigs.array() > 1.5 * mean).count());
  }
  return std::max(count, 1);
}

BeamPattern ds_beam_pattern(const HpdMatrix& gamma, const ArrayGeometry& geom,
                            const Eigen::VectorXd& thetas,
                            double wavelength) {
  if (thetas.size() == 0) {
    throw EmptyGrid("empty direction grid");
  }
  if (gamma.dim() != geom.size()) {
    throw DimensionMismatch("correlation matrix does not match array size");
  }
  BeamPattern out;
  out.thetas = thetas;
  out.power.resize(thetas.size());
  out.kind = BeamformerKind::DelaySum;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    const Eigen::VectorXcd d = steering_vector(geom, thetas(i), wavelength);
    out.power(i) = std::real(d.dot(gamma.entries() * d));
  }
  return out;
}

BeamPattern sbsp_beam_pattern(const HpdMatrix& gamma,
                              const ArrayGeometry& geom,
                              const Eigen::VectorXd& thetas, double wavelength,
                              int subspace_dim) {
  if (thetas.size() == 0) {
    throw EmptyGrid("empty direction grid");
  }
  if (gamma.dim() != geom.size()) {
    throw DimensionMismatch("correlation matrix does not match array size");
  }
  check_subspace_dim(subspace_dim, static_cast<int>(gamma.dim()));
  const Eigen::MatrixXcd basis =
      leading_eigenvectors(gamma.entries(), subspace_dim);
  BeamPattern out;
  out.thetas = thetas;
  out.power.resize(thetas.size());
  out.kind = BeamformerKind::Subspace;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    const Eigen::VectorXcd d = steering_vector(geom, thetas(i), wavelength);
    out.power(i) = (basis.adjoint() * d).squaredNorm();
  }
  return out;
}

BeamPattern mvdr_beam_pattern(const HpdMatrix& gamma,
                              const ArrayGeometry& geom,
                              const Eigen::VectorXd& thetas,
                              double wavelength) {
  if (thetas.size() == 0) {
    throw EmptyGrid("empty direction grid");
  }
  if (gamma.dim() != geom.size()) {
    throw DimensionMismatch("correlation matrix does not match array size");
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(gamma.entries());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("Cholesky factorization failed");
  }
  BeamPattern out;
  out.thetas = thetas;
  out.power.resize(thetas.size());
  out.kind = BeamformerKind::Mvdr;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    const Eigen::VectorXcd d = steering_vector(geom, thetas(i), wavelength);
    const double quad = std::real(d.dot(llt.solve(d)));
    out.power(i) = 1.0 / quad;
  }
  return out;
}

BeamPattern intersection_beam_pattern(
    const std::vector<HpdMatrix>& segments, const ArrayGeometry& geom,
    const Eigen::VectorXd& thetas, double wavelength,
    const std::vector<int>& per_segment_dims, int subspace_dim,
    bool symmetrize) {
  if (segments.empty()) {
    throw EmptyInput("no segment matrices");
  }
  if (thetas.size() == 0) {
    throw EmptyGrid("empty direction grid");
  }
  if (per_segment_dims.size() != segments.size()) {
    throw DimensionMismatch(
        "per-segment subspace dimensions do not match matrix count");
  }
  const int m = static_cast<int>(geom.size());
  check_subspace_dim(subspace_dim, m);

  // Product of the segment projectors in segment order. The product is not
  // Hermitian in general, so a general eigensolver picks its dominant
  // directions.
  Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(m, m);
  for (size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].dim() != m) {
      throw DimensionMismatch("segment matrix does not match array size");
    }
    check_subspace_dim(per_segment_dims[i], m);
    const Eigen::MatrixXcd basis =
        leading_eigenvectors(segments[i].entries(), per_segment_dims[i]);
    product = (basis * basis.adjoint()) * product;
  }
  if (symmetrize) {
    product = 0.5 * (product + product.adjoint()).eval();
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(product);
  if (es.info() != Eigen::Success) {
    throw NonFiniteEigenvalue("projector product eigendecomposition failed");
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXcd vals = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(vals(a)) > std::abs(vals(b));
  });
  Eigen::MatrixXcd span(m, subspace_dim);
  for (int j = 0; j < subspace_dim; ++j) {
    span.col(j) = es.eigenvectors().col(order[j]);
  }
  // Eigenvectors of a non-normal matrix need not be orthogonal; projection
  // power only makes sense against an orthonormal basis.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(span);
  const Eigen::MatrixXcd basis =
      qr.householderQ() * Eigen::MatrixXcd::Identity(m, subspace_dim);

  BeamPattern out;
  out.thetas = thetas;
  out.power.resize(thetas.size());
  out.kind = BeamformerKind::Intersection;
  out.mean_kind = MeanKind::PerSegment;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    const Eigen::VectorXcd d = steering_vector(geom, thetas(i), wavelength);
    out.power(i) = (basis.adjoint() * d).squaredNorm();
  }
  return out;
}

DoaEstimate pick_peaks(const BeamPattern& pattern, int count,
                       double min_separation) {
  const Eigen::Index n = pattern.thetas.size();
  if (n == 0) {
    throw EmptyGrid("empty pattern");
  }
  if (count < 1) {
    throw InvalidArgument("peak count must be positive");
  }

  // Local maxima, boundaries included when they top their single neighbor.
  std::vector<Eigen::Index> maxima;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool left_ok = (i == 0) || pattern.power(i) > pattern.power(i - 1);
    const bool right_ok =
        (i == n - 1) || pattern.power(i) > pattern.power(i + 1);
    if (left_ok && right_ok) {
      maxima.push_back(i);
    }
  }
  if (maxima.empty()) {
    // Perfectly flat pattern: fall back to the first global maximum so a
    // single degenerate estimate is still produced.
    Eigen::Index argmax = 0;
    pattern.power.maxCoeff(&argmax);
    maxima.push_back(argmax);
  }
  // Strongest first; equal powers resolve toward the smaller angle.
  std::stable_sort(maxima.begin(), maxima.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (pattern.power(a) != pattern.power(b)) {
                       return pattern.power(a) > pattern.power(b);
                     }
                     return pattern.thetas(a) < pattern.thetas(b);
                   });

  DoaEstimate out;
  for (Eigen::Index idx : maxima) {
    if (static_cast<int>(out.directions.size()) == count) {
      break;
    }
    const double theta = pattern.thetas(idx);
    const bool clear = std::all_of(
        out.directions.begin(), out.directions.end(),
        [&](double d) { return std::abs(d - theta) >= min_separation; });
    if (clear) {
      out.directions.push_back(theta);
      out.peak_powers.push_back(pattern.power(idx));
    }
  }
  out.complete = static_cast<int>(out.directions.size()) == count;
  return out;
}

}  // namespace rbeam
