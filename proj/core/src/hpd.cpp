#include "rbeam/hpd.hpp"

#include <cmath>

namespace rbeam {
namespace {

// Relative Hermiticity tolerance from the type invariant.
constexpr double kHermitianTol = 1e-12;

void check_square_nonempty(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw EmptyInput(std::string(what) + ": empty matrix");
  }
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
}

void check_hermitian(const Eigen::MatrixXcd& m, const char* what) {
  const double asym = (m - m.adjoint()).norm();
  if (asym > kHermitianTol * m.norm()) {
    throw NotHermitian(std::string(what) + ": matrix is not Hermitian");
  }
}

}  // namespace

HpdMatrix::HpdMatrix(Eigen::MatrixXcd entries, double diagonal_loading)
    : entries_(std::move(entries)) {
  check_square_nonempty(entries_, "HpdMatrix");
  check_hermitian(entries_, "HpdMatrix");
  if (diagonal_loading < 0.0) {
    throw InvalidArgument("HpdMatrix: diagonal loading must be nonnegative");
  }
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
  if (diagonal_loading > 0.0) {
    entries_.diagonal().array() += diagonal_loading;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || !es.eigenvalues().allFinite()) {
    throw NonFiniteEigenvalue("HpdMatrix: eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPositiveDefinite("HpdMatrix: smallest eigenvalue is not positive");
  }
}

HpdMatrix HpdMatrix::identity(int dim) {
  return HpdMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

TangentMatrix::TangentMatrix(Eigen::MatrixXcd entries)
    : entries_(std::move(entries)) {
  check_square_nonempty(entries_, "TangentMatrix");
  check_hermitian(entries_, "TangentMatrix");
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
}

TangentMatrix TangentMatrix::zero(int dim) {
  return TangentMatrix(Eigen::MatrixXcd::Zero(dim, dim));
}

namespace detail {

Eigen::MatrixXcd spectral_apply(const Eigen::MatrixXcd& hermitian,
                                double (*fn)(double), bool require_positive) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
  if (es.info() != Eigen::Success || !es.eigenvalues().allFinite()) {
    throw NonFiniteEigenvalue("spectral_apply: eigendecomposition failed");
  }
  if (require_positive && es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPositiveDefinite("spectral_apply: matrix is not positive definite");
  }
  const Eigen::VectorXd mapped = es.eigenvalues().unaryExpr(fn);
  if (!mapped.allFinite()) {
    throw NonFiniteEigenvalue("spectral_apply: mapped eigenvalue not finite");
  }
  Eigen::MatrixXcd out = es.eigenvectors() * mapped.asDiagonal() *
                         es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace detail

HpdMatrix hpd_sqrt(const HpdMatrix& g) {
  return HpdMatrix(detail::spectral_apply(
      g.entries(), [](double x) { return std::sqrt(x); }, true));
}

HpdMatrix hpd_inv_sqrt(const HpdMatrix& g) {
  return HpdMatrix(detail::spectral_apply(
      g.entries(), [](double x) { return 1.0 / std::sqrt(x); }, true));
}

TangentMatrix hpd_log(const HpdMatrix& g) {
  return TangentMatrix(detail::spectral_apply(
      g.entries(), [](double x) { return std::log(x); }, true));
}

HpdMatrix exp_of_tangent(const TangentMatrix& t) {
  return HpdMatrix(detail::spectral_apply(
      t.entries(), [](double x) { return std::exp(x); }, false));
}

Eigen::VectorXd hpd_eigenvalues(const HpdMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.entries(),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NonFiniteEigenvalue("hpd_eigenvalues: eigendecomposition failed");
  }
  return es.eigenvalues();
}

}  // namespace rbeam
