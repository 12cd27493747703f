#include "radcom/tbf_balancing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "radcom/projections.hpp"

namespace radcom {

namespace {

// D = [d_1 u_1, ..., d_K u_K], r x K.
CMat build_dual_matrix(const RVec& d, const EffectiveChannel& chan) {
  return (d.asDiagonal() * chan.rows).adjoint();
}

// Nuclear norm of D, i.e. h(d).
double dual_objective(const RVec& d, const EffectiveChannel& chan) {
  const CMat D = build_dual_matrix(d, chan);
  Eigen::JacobiSVD<CMat> svd(D);
  return svd.singularValues().sum();
}

double gamma_from_t(double t) {
  if (t >= 1.0) return std::numeric_limits<double>::infinity();
  return t * t / (1.0 - t * t);
}

// F_u = (D D^H)^{-1/2} D on the column space, completed on the orthogonal
// complement for users whose dual weight converged to zero (the interior
// limit of the recovery formula). The diagonal is then scaled down to
// Re{u_k^H f_k} = t s_k, which equalizes the per-user SINRs at gamma.
CMat recover_precoder_matrix(const RVec& d, double t, const EffectiveChannel& chan) {
  const int K = chan.users();
  const int r = chan.rank;
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0)) {
    throw std::runtime_error("solve_tbf_balancing: degenerate dual, D = 0");
  }
  std::vector<int> active, inactive;
  for (int k = 0; k < K; ++k) {
    (d(k) > 1e-9 * dmax ? active : inactive).push_back(k);
  }

  CMat D = CMat::Zero(r, K);
  for (int k : active) D.col(k) = d(k) * chan.u(k);
  if (active.empty()) {
    throw std::runtime_error("solve_tbf_balancing: degenerate dual, D = 0");
  }

  const HermitianEig eig = eig_hermitian(D * D.adjoint());
  const double cutoff = 1e-12 * std::max(eig.values(0), 0.0);
  RVec inv_roots = RVec::Zero(r);
  int col_rank = 0;
  for (int i = 0; i < r; ++i) {
    if (eig.values(i) > cutoff) {
      inv_roots(i) = 1.0 / std::sqrt(eig.values(i));
      ++col_rank;
    }
  }
  CMat F_u = eig.vectors * inv_roots.asDiagonal() * eig.vectors.adjoint() * D;

  if (!inactive.empty() && col_rank < r) {
    // Complete zero-weight users on the orthogonal complement of C(D).
    const CMat basis = eig.vectors.leftCols(col_rank);
    const CMat Q = CMat::Identity(r, r) - basis * basis.adjoint();
    CMat B = CMat::Zero(r, r);
    std::vector<CVec> q(inactive.size());
    for (size_t a = 0; a < inactive.size(); ++a) {
      q[a] = Q * chan.u(inactive[a]);
      B += q[a] * q[a].adjoint();
    }
    const CMat B_inv_half = inv_sqrt_psd(B, 1e-12);
    for (size_t a = 0; a < inactive.size(); ++a) {
      F_u.col(inactive[a]) = B_inv_half * q[a];
    }
  }

  for (int k = 0; k < K; ++k) {
    const double c = (chan.rows.row(k) * F_u.col(k)).value().real();
    const double target = t * chan.s(k);
    if (c > target && c > 0.0) F_u.col(k) *= target / c;
  }
  return chan.rows * F_u;
}

}  // namespace

std::pair<double, RVec> dual_objective_and_gradient(const RVec& d, const EffectiveChannel& chan) {
  const int K = chan.users();
  if (d.size() != K) {
    throw std::invalid_argument("dual_objective_and_gradient: d must have length K");
  }
  if ((d.array() <= 0.0).any()) {
    throw std::invalid_argument("dual_objective_and_gradient: d must be strictly positive");
  }
  const CMat D = build_dual_matrix(d, chan);
  const CMat gram = hermitized(D.adjoint() * D);  // K x K
  const HermitianEig eig = eig_hermitian(gram);
  const RVec roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  const CMat gram_half = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  RVec grad(K);
  for (int k = 0; k < K; ++k) grad(k) = gram_half(k, k).real() / d(k);
  return {roots.sum(), grad};
}

BalancingResult solve_tbf_balancing(const EffectiveChannel& chan, const TbfOptions& opts) {
  if (!(opts.tol > 0.0) || opts.max_iterations < 1) {
    throw std::invalid_argument("solve_tbf_balancing: invalid options");
  }
  const int K = chan.users();

  // Strictly feasible start: d_k = 1/(K s_k) gives s^T d = 1 exactly.
  RVec d = (K * chan.s.array()).inverse().matrix();

  BalancingResult result;
  double h = dual_objective(d, chan);
  bool stalled = false;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    // Gradient at the boundary is the limit from the interior.
    const RVec d_eval = d.cwiseMax(1e-12);
    const RVec grad = dual_objective_and_gradient(d_eval, chan).second;
    const RVec delta = project_weighted_simplex(d - grad, chan.s) - d;
    const double delta_norm = delta.norm();

    if (delta_norm < opts.tol) {
      result.trace.push_back({iter, h, gamma_from_t(h), 0.0, delta_norm, 0.0});
      result.converged = true;
      break;
    }

    const double slope = grad.dot(delta);  // <= -||delta||^2
    double alpha = 1.0;
    double h_new = h;
    bool accepted = false;
    for (int halving = 0; halving <= opts.max_halvings; ++halving) {
      h_new = dual_objective(d + alpha * delta, chan);
      if (h_new <= h + opts.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.shrink;
    }
    if (!accepted && h_new > h) {
      // No decrease left at the smallest step; stop at the best iterate.
      result.trace.push_back({iter, h, gamma_from_t(h), 0.0, delta_norm, 0.0});
      stalled = true;
      break;
    }
    result.trace.push_back({iter, h, gamma_from_t(h), alpha, delta_norm, 0.0});
    d += alpha * delta;
    h = h_new;
  }
  (void)stalled;

  result.iterations = iter;
  result.t = dual_objective(d, chan);
  result.gamma = gamma_from_t(result.t);
  result.d = d;
  const CMat D = build_dual_matrix(d, chan);
  result.Y = 0.5 * sqrt_psd(D * D.adjoint());
  result.F = recover_precoder_matrix(d, result.t, chan);
  return result;
}

}  // namespace radcom
