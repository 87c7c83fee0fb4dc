#pragma once

#include <vector>

#include "rbeam/hpd.hpp"

namespace rbeam {

// Stopping rule for the fixed-point Karcher iteration: stop once the
// Frobenius norm of the tangent-space mean falls below `tolerance`.
struct MeanConfig {
  double tolerance = 1e-9;
  int max_iterations = 200;
};

struct KarcherResult {
  HpdMatrix mean;
  int iterations = 0;
  bool converged = false;
};

// Affine-invariant (geodesic) distance ||log(g2^-1/2 g1 g2^-1/2)||_F.
double affine_invariant_distance(const HpdMatrix& g1, const HpdMatrix& g2);

// Log-Euclidean distance ||log g1 - log g2||_F.
double log_euclidean_distance(const HpdMatrix& g1, const HpdMatrix& g2);

// Manifold logarithm at `base`: base^1/2 log(base^-1/2 g base^-1/2) base^1/2.
TangentMatrix log_map(const HpdMatrix& base, const HpdMatrix& g);

// Manifold exponential at `base`: base^1/2 exp(base^-1/2 t base^-1/2) base^1/2.
HpdMatrix exp_map(const HpdMatrix& base, const TangentMatrix& t);

// Entrywise arithmetic mean.
HpdMatrix euclidean_mean(const std::vector<HpdMatrix>& ms);

// exp of the arithmetic mean of matrix logarithms.
HpdMatrix log_euclidean_mean(const std::vector<HpdMatrix>& ms);

// Closed-form Riemannian mean of a pairwise-commuting family: the product of
// K-th roots, evaluated in a shared eigenbasis. Rejects inputs whose
// commutators exceed `commutator_tolerance` (Frobenius, relative to the
// product of the operands' norms).
HpdMatrix commuting_mean(const std::vector<HpdMatrix>& ms,
                         double commutator_tolerance = 1e-8);

// Fixed-point iteration for the Karcher (Fréchet) mean: start at the
// Euclidean mean, repeatedly apply the exp of the tangent-space average.
// A non-converged run returns the last iterate with `converged == false`.
KarcherResult karcher_mean(const std::vector<HpdMatrix>& ms,
                           const MeanConfig& cfg = {});

// One step of the streaming (inductive) Riemannian estimator:
// r_i = r^1/2 (r^-1/2 g r^-1/2)^(1/i) r^1/2 with r the previous state.
// i counts segments consumed including this one; i == 1 returns g exactly.
HpdMatrix streaming_riemannian_update(const HpdMatrix& r_prev,
                                      const HpdMatrix& g_i, int i);

// One step of the streaming arithmetic mean over rank-1 outer products:
// e_n = ((n-1)/n) e_prev + (1/n) z_outer. n counts terms consumed including
// this one; n == 1 returns z_outer. Inputs are Hermitian PSD, so the state is
// a plain matrix rather than an HpdMatrix.
Eigen::MatrixXcd streaming_euclidean_update(const Eigen::MatrixXcd& e_prev,
                                            const Eigen::MatrixXcd& z_outer,
                                            int n);

}  // namespace rbeam
