#pragma once

#include <Eigen/Dense>

#include "rbeam/errors.hpp"

namespace rbeam {

// Hermitian positive-definite matrix with validated construction: the value
// type for spatial correlation matrices and every point on the manifold.
// Construction symmetrizes the input, optionally adds diagonal loading, and
// rejects anything that is not Hermitian (1e-12 relative) or not strictly PD.
class HpdMatrix {
 public:
  explicit HpdMatrix(Eigen::MatrixXcd entries, double diagonal_loading = 0.0);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  static HpdMatrix identity(int dim);

 private:
  Eigen::MatrixXcd entries_;
};

// Hermitian matrix without a definiteness requirement; lives in the tangent
// space at some manifold point.
class TangentMatrix {
 public:
  explicit TangentMatrix(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  static TangentMatrix zero(int dim);

 private:
  Eigen::MatrixXcd entries_;
};

// Spectral calculus via unitary eigendecomposition, re-symmetrized after
// reassembly so invariants hold at tight tolerances.
HpdMatrix hpd_sqrt(const HpdMatrix& g);
HpdMatrix hpd_inv_sqrt(const HpdMatrix& g);
TangentMatrix hpd_log(const HpdMatrix& g);
HpdMatrix exp_of_tangent(const TangentMatrix& t);

// Eigenvalues of a validated HPD matrix, ascending.
Eigen::VectorXd hpd_eigenvalues(const HpdMatrix& g);

namespace detail {

// Shared spectral kernel on raw Hermitian data. `fn` maps each eigenvalue;
// `require_positive` rejects non-PD spectra before applying `fn`.
Eigen::MatrixXcd spectral_apply(const Eigen::MatrixXcd& hermitian,
                                double (*fn)(double), bool require_positive);

}  // namespace detail

}  // namespace rbeam
