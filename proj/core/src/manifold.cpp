#include "rbeam/manifold.hpp"

#include <cmath>
#include <string>

namespace rbeam {
namespace {

void check_same_dim(const HpdMatrix& a, const HpdMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(what) + ": dimensions differ");
  }
}

void check_nonempty_uniform(const std::vector<HpdMatrix>& ms,
                            const char* what) {
  if (ms.empty()) {
    throw EmptyInput(std::string(what) + ": empty input list");
  }
  for (const auto& m : ms) {
    if (m.dim() != ms.front().dim()) {
      throw DimensionMismatch(std::string(what) + ": dimensions differ");
    }
  }
}

double log_fn(double x) { return std::log(x); }
double exp_fn(double x) { return std::exp(x); }
double sqrt_fn(double x) { return std::sqrt(x); }
double inv_sqrt_fn(double x) { return 1.0 / std::sqrt(x); }

Eigen::MatrixXcd arithmetic_mean_raw(const std::vector<HpdMatrix>& ms) {
  Eigen::MatrixXcd acc =
      Eigen::MatrixXcd::Zero(ms.front().dim(), ms.front().dim());
  for (const auto& m : ms) acc += m.entries();
  return acc / static_cast<double>(ms.size());
}

// Eigenvalues of the whitened matrix s_inv * g * s_inv, which are the
// generalized eigenvalues underlying the affine-invariant distance.
Eigen::VectorXd whitened_eigenvalues(const HpdMatrix& g1, const HpdMatrix& g2) {
  const Eigen::MatrixXcd s_inv = detail::spectral_apply(
      g2.entries(), inv_sqrt_fn, true);
  Eigen::MatrixXcd c = s_inv * g1.entries() * s_inv;
  c = 0.5 * (c + c.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NonFiniteEigenvalue("distance: eigendecomposition failed");
  }
  return es.eigenvalues();
}

}  // namespace

double affine_invariant_distance(const HpdMatrix& g1, const HpdMatrix& g2) {
  check_same_dim(g1, g2, "affine_invariant_distance");
  const Eigen::VectorXd lam = whitened_eigenvalues(g1, g2);
  if (lam.minCoeff() <= 0.0) {
    throw NotPositiveDefinite("affine_invariant_distance: whitened spectrum");
  }
  return lam.array().log().matrix().norm();
}

double log_euclidean_distance(const HpdMatrix& g1, const HpdMatrix& g2) {
  check_same_dim(g1, g2, "log_euclidean_distance");
  const Eigen::MatrixXcd l1 = detail::spectral_apply(g1.entries(), log_fn, true);
  const Eigen::MatrixXcd l2 = detail::spectral_apply(g2.entries(), log_fn, true);
  return (l1 - l2).norm();
}

TangentMatrix log_map(const HpdMatrix& base, const HpdMatrix& g) {
  check_same_dim(base, g, "log_map");
  const Eigen::MatrixXcd s = detail::spectral_apply(base.entries(), sqrt_fn, true);
  const Eigen::MatrixXcd s_inv =
      detail::spectral_apply(base.entries(), inv_sqrt_fn, true);
  Eigen::MatrixXcd c = s_inv * g.entries() * s_inv;
  c = 0.5 * (c + c.adjoint()).eval();
  const Eigen::MatrixXcd logc = detail::spectral_apply(c, log_fn, true);
  Eigen::MatrixXcd t = s * logc * s;
  return TangentMatrix(0.5 * (t + t.adjoint()));
}

HpdMatrix exp_map(const HpdMatrix& base, const TangentMatrix& t) {
  if (base.dim() != t.dim()) {
    throw DimensionMismatch("exp_map: dimensions differ");
  }
  const Eigen::MatrixXcd s = detail::spectral_apply(base.entries(), sqrt_fn, true);
  const Eigen::MatrixXcd s_inv =
      detail::spectral_apply(base.entries(), inv_sqrt_fn, true);
  Eigen::MatrixXcd c = s_inv * t.entries() * s_inv;
  c = 0.5 * (c + c.adjoint()).eval();
  const Eigen::MatrixXcd expc = detail::spectral_apply(c, exp_fn, false);
  Eigen::MatrixXcd out = s * expc * s;
  return HpdMatrix(0.5 * (out + out.adjoint()));
}

HpdMatrix euclidean_mean(const std::vector<HpdMatrix>& ms) {
  check_nonempty_uniform(ms, "euclidean_mean");
  return HpdMatrix(arithmetic_mean_raw(ms));
}

HpdMatrix log_euclidean_mean(const std::vector<HpdMatrix>& ms) {
  check_nonempty_uniform(ms, "log_euclidean_mean");
  Eigen::MatrixXcd acc =
      Eigen::MatrixXcd::Zero(ms.front().dim(), ms.front().dim());
  for (const auto& m : ms) {
    acc += detail::spectral_apply(m.entries(), log_fn, true);
  }
  acc /= static_cast<double>(ms.size());
  return HpdMatrix(detail::spectral_apply(acc, exp_fn, false));
}

HpdMatrix commuting_mean(const std::vector<HpdMatrix>& ms,
                         double commutator_tolerance) {
  check_nonempty_uniform(ms, "commuting_mean");
  const int k = static_cast<int>(ms.size());
  const int dim = ms.front().dim();
  if (k == 1) return ms.front();

  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const Eigen::MatrixXcd& ga = ms[a].entries();
      const Eigen::MatrixXcd& gb = ms[b].entries();
      const double comm = (ga * gb - gb * ga).norm();
      if (comm > commutator_tolerance * ga.norm() * gb.norm()) {
        throw NotCommuting("commuting_mean: commutator check failed");
      }
    }
  }

  // A positive linear combination of a commuting family shares its eigenbasis
  // unless the weights conspire to merge distinct eigenvalues. Validate the
  // basis against every input and retry once with incommensurate weights.
  auto try_basis = [&](auto weight) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(dim, dim);
    for (int l = 0; l < k; ++l) combo += weight(l) * ms[l].entries();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(combo);
    if (es.info() != Eigen::Success) {
      throw NonFiniteEigenvalue("commuting_mean: eigendecomposition failed");
    }
    return es.eigenvectors();
  };
  auto basis_fits = [&](const Eigen::MatrixXcd& v) {
    for (const auto& m : ms) {
      const Eigen::MatrixXcd d = v.adjoint() * m.entries() * v;
      const double off = (d - Eigen::MatrixXcd(
                                  d.diagonal().asDiagonal())).norm();
      if (off > 1e-8 * m.entries().norm()) return false;
    }
    return true;
  };

  Eigen::MatrixXcd v = try_basis([](int l) { return 1.0 + l; });
  if (!basis_fits(v)) {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    v = try_basis([phi](int l) { return std::pow(phi, l + 1); });
    if (!basis_fits(v)) {
      throw NotCommuting("commuting_mean: no shared eigenbasis found");
    }
  }

  // Per-eigenvalue geometric mean across the family.
  Eigen::VectorXd log_acc = Eigen::VectorXd::Zero(dim);
  for (const auto& m : ms) {
    const Eigen::VectorXcd diag = (v.adjoint() * m.entries() * v).diagonal();
    for (int i = 0; i < dim; ++i) {
      const double lam = diag(i).real();
      if (lam <= 0.0) {
        throw NotPositiveDefinite("commuting_mean: nonpositive eigenvalue");
      }
      log_acc(i) += std::log(lam);
    }
  }
  log_acc /= static_cast<double>(k);
  Eigen::MatrixXcd out =
      v * log_acc.array().exp().matrix().asDiagonal() * v.adjoint();
  return HpdMatrix(0.5 * (out + out.adjoint()));
}

namespace {

// Whitened tangent mean at g together with the quantities the descent loop
// needs: the congruence factors of g and the sum of squared distances to the
// inputs (the objective the mean minimizes).
struct TangentState {
  Eigen::MatrixXcd sqrt;
  Eigen::MatrixXcd tangent;
  double cost = 0.0;
};

TangentState tangent_state(const Eigen::MatrixXcd& g,
                           const std::vector<HpdMatrix>& ms) {
  TangentState st;
  st.sqrt = detail::spectral_apply(g, sqrt_fn, true);
  const Eigen::MatrixXcd s_inv = detail::spectral_apply(g, inv_sqrt_fn, true);
  st.tangent = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
  for (const auto& m : ms) {
    Eigen::MatrixXcd c = s_inv * m.entries() * s_inv;
    c = 0.5 * (c + c.adjoint()).eval();
    const Eigen::MatrixXcd l = detail::spectral_apply(c, log_fn, true);
    st.tangent += l;
    st.cost += l.squaredNorm();
  }
  st.tangent /= static_cast<double>(ms.size());
  return st;
}

Eigen::MatrixXcd geodesic_step(const TangentState& st, double step) {
  const Eigen::MatrixXcd next =
      st.sqrt * detail::spectral_apply((step * st.tangent).eval(), exp_fn,
                                       false) *
      st.sqrt;
  return 0.5 * (next + next.adjoint());
}

}  // namespace

KarcherResult karcher_mean(const std::vector<HpdMatrix>& ms,
                           const MeanConfig& cfg) {
  check_nonempty_uniform(ms, "karcher_mean");
  if (cfg.tolerance <= 0.0 || cfg.max_iterations < 1) {
    throw InvalidArgument("karcher_mean: invalid MeanConfig");
  }
  if (ms.size() == 1) {
    return KarcherResult{ms.front(), 0, true};
  }

  // Exp/log maps share the same congruence by g^1/2, so each update is
  // g <- g^1/2 exp(step * t) g^1/2 with t the whitened mean of logs. The
  // full step is the classical fixed point; when the family is spread out
  // it can overshoot and cycle, so the step is halved until the objective
  // actually decreases (the tangent mean is minus half the gradient, giving
  // the slope used in the acceptance test).
  Eigen::MatrixXcd g = arithmetic_mean_raw(ms);
  TangentState cur = tangent_state(g, ms);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const double tangent_norm = (cur.sqrt * cur.tangent * cur.sqrt).norm();
    if (tangent_norm < cfg.tolerance) {
      g = geodesic_step(cur, 1.0);
      return KarcherResult{HpdMatrix(g), it, true};
    }

    const double slope =
        2.0 * static_cast<double>(ms.size()) * cur.tangent.squaredNorm();
    double step = 1.0;
    Eigen::MatrixXcd next = geodesic_step(cur, step);
    TangentState cand = tangent_state(next, ms);
    while (cand.cost > cur.cost - 1e-4 * step * slope && step > 1e-12) {
      step *= 0.5;
      next = geodesic_step(cur, step);
      cand = tangent_state(next, ms);
    }
    g = std::move(next);
    cur = std::move(cand);
  }
  return KarcherResult{HpdMatrix(g), cfg.max_iterations, false};
}

HpdMatrix streaming_riemannian_update(const HpdMatrix& r_prev,
                                      const HpdMatrix& g_i, int i) {
  if (i < 1) {
    throw InvalidIndex("streaming_riemannian_update: index must be >= 1");
  }
  check_same_dim(r_prev, g_i, "streaming_riemannian_update");
  if (i == 1) return g_i;

  const Eigen::MatrixXcd s = detail::spectral_apply(r_prev.entries(), sqrt_fn, true);
  const Eigen::MatrixXcd s_inv =
      detail::spectral_apply(r_prev.entries(), inv_sqrt_fn, true);
  Eigen::MatrixXcd c = s_inv * g_i.entries() * s_inv;
  c = 0.5 * (c + c.adjoint()).eval();

  // c^(1/i) through the spectrum; a capturing lambda cannot decay to the
  // plain function pointer spectral_apply takes, so inline the same recipe.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  if (es.info() != Eigen::Success) {
    throw NonFiniteEigenvalue("streaming_riemannian_update: eigensolver failed");
  }
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPositiveDefinite("streaming_riemannian_update: whitened spectrum");
  }
  const double p = 1.0 / static_cast<double>(i);
  const Eigen::VectorXd powered =
      es.eigenvalues().array().pow(p).matrix();
  Eigen::MatrixXcd root = es.eigenvectors() * powered.asDiagonal() *
                          es.eigenvectors().adjoint();
  Eigen::MatrixXcd out = s * (0.5 * (root + root.adjoint())) * s;
  return HpdMatrix(0.5 * (out + out.adjoint()));
}

Eigen::MatrixXcd streaming_euclidean_update(const Eigen::MatrixXcd& e_prev,
                                            const Eigen::MatrixXcd& z_outer,
                                            int n) {
  if (n < 1) {
    throw InvalidIndex("streaming_euclidean_update: index must be >= 1");
  }
  if (z_outer.rows() != z_outer.cols()) {
    throw DimensionMismatch("streaming_euclidean_update: update not square");
  }
  if (n == 1) return z_outer;
  if (e_prev.rows() != z_outer.rows() || e_prev.cols() != z_outer.cols()) {
    throw DimensionMismatch("streaming_euclidean_update: dimensions differ");
  }
  const double w = 1.0 / static_cast<double>(n);
  return (1.0 - w) * e_prev + w * z_outer;
}

}  // namespace rbeam
