#include "radcom/dpc_balancing.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "radcom/projections.hpp"

namespace radcom {

namespace {

std::vector<int> outside_column_space(const CMat& Y, const CMat& rows_n,
                                      const DpcBalancingOptions& opts) {
  const int K = static_cast<int>(rows_n.rows());
  const int r = static_cast<int>(Y.rows());
  const HermitianEig eig = eig_hermitian(Y);
  const double cutoff = opts.pinv_cutoff * std::max(eig.values(0), 0.0);
  int rank_y = 0;
  while (rank_y < r && eig.values(rank_y) > cutoff) ++rank_y;

  std::vector<int> outside;
  if (rank_y == r) {
    for (int k = 0; k < K; ++k) {
      if (rows_n.row(k).norm() == 0.0) outside.push_back(k);
    }
    return outside;
  }
  const CMat basis = eig.vectors.leftCols(rank_y);
  for (int k = 0; k < K; ++k) {
    const CVec u = rows_n.row(k).adjoint();
    const double norm = u.norm();
    if (norm == 0.0) {
      outside.push_back(k);
      continue;
    }
    const double residual = (u - basis * (basis.adjoint() * u)).norm() / norm;
    if (residual > opts.column_space_tol) outside.push_back(k);
  }
  return outside;
}

}  // namespace

FixedPointResult fixed_point_inner(const CMat& Y, const EffectiveChannel& chan,
                                   const DpcBalancingOptions& opts, const RVec* warm_start) {
  const int K = chan.users();
  const int r = chan.rank;
  if (Y.rows() != r || Y.cols() != r) {
    throw std::invalid_argument("fixed_point_inner: Y must be r x r");
  }
  if (!is_hermitian(Y, 1e-8)) {
    throw std::invalid_argument("fixed_point_inner: Y is not Hermitian");
  }
  const CMat rows_n = chan.noise_normalized_rows();

  const std::vector<int> outside = outside_column_space(Y, rows_n, opts);
  std::vector<bool> inactive(K, false);
  for (int k : outside) inactive[k] = true;
  std::vector<int> active;
  for (int k = 0; k < K; ++k) {
    if (!inactive[k]) active.push_back(k);
  }
  if (active.empty()) {
    throw std::invalid_argument(
        "fixed_point_inner: every user lies outside C(Y), gamma undefined");
  }

  RVec d = RVec::Zero(K);
  if (warm_start != nullptr && warm_start->size() == K) {
    for (int k : active) d(k) = std::max((*warm_start)(k), 0.0);
  }
  if (d.sum() <= 0.0) {
    for (int k : active) d(k) = 1.0;
  }
  d /= d.sum();

  FixedPointResult out;
  RVec dhat = RVec::Zero(K);
  for (int it = 1; it <= opts.inner_cap; ++it) {
    CMat M = Y;
    for (int k : active) {
      const CVec u = rows_n.row(k).adjoint();
      const PsdSolver solver(M, opts.pinv_cutoff);
      const double val = (u.adjoint() * solver.solve(u)).value().real();
      if (!(val > 0.0)) {
        throw std::runtime_error("fixed_point_inner: nonpositive SINR form, degenerate input");
      }
      dhat(k) = 1.0 / val;
      M += d(k) * u * u.adjoint();
    }
    const double total = [&] {
      double s = 0.0;
      for (int k : active) s += dhat(k);
      return s;
    }();
    double diff = 0.0;
    for (int k : active) {
      const double next = dhat(k) / total;
      diff += (next - d(k)) * (next - d(k));
      d(k) = next;
    }
    out.iterations = it;
    if (diff < opts.inner_eps) {
      out.converged = true;
      break;
    }
  }

  // gamma from the fixed-point identity, averaged over the served users.
  double gamma = 0.0;
  CMat M = Y;
  for (int k : active) {
    const CVec u = rows_n.row(k).adjoint();
    const PsdSolver solver(M, opts.pinv_cutoff);
    gamma += d(k) * (u.adjoint() * solver.solve(u)).value().real();
    M += d(k) * u * u.adjoint();
  }
  out.gamma = gamma / static_cast<double>(active.size());
  out.d = d;
  return out;
}

CMat gamma_gradient(const CMat& Y, const RVec& d, double gamma, const EffectiveChannel& chan,
                    double pinv_cutoff) {
  (void)gamma;
  const int K = chan.users();
  const int r = chan.rank;
  if (Y.rows() != r || Y.cols() != r || d.size() != K) {
    throw std::invalid_argument("gamma_gradient: dimension mismatch");
  }
  const CMat rows_n = chan.noise_normalized_rows();

  std::vector<CVec> fhat(K);
  CMat M = Y;
  for (int k = 0; k < K; ++k) {
    const CVec u = rows_n.row(k).adjoint();
    const PsdSolver solver(M, pinv_cutoff);
    fhat[k] = solver.solve(u);
    M += d(k) * u * u.adjoint();
  }

  RMat A = RMat::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    A(k, k) = (rows_n.row(k) * fhat[k]).value().real();
    for (int i = 0; i < k; ++i) {
      A(k, i) = -d(k) * std::norm((rows_n.row(i) * fhat[k]).value());
    }
  }
  Eigen::FullPivLU<RMat> lu(A.transpose());
  if (!lu.isInvertible()) {
    throw std::runtime_error("gamma_gradient: singular sensitivity system, degenerate point");
  }
  const RVec a = lu.solve(RVec::Ones(K));
  const double denom = a.sum();
  if (denom == 0.0) {
    throw std::runtime_error("gamma_gradient: degenerate sensitivity system");
  }

  CMat grad = CMat::Zero(r, r);
  for (int k = 0; k < K; ++k) {
    grad += (a(k) * d(k)) * (fhat[k] * fhat[k].adjoint());
  }
  return hermitized(-grad / denom);
}

CMat recover_from_dual(const CMat& Y, const RVec& d, const RVec& per_user_gamma,
                       const EffectiveChannel& chan, double pinv_cutoff) {
  const int K = chan.users();
  if (d.size() != K || per_user_gamma.size() != K) {
    throw std::invalid_argument("recover_from_dual: dimension mismatch");
  }
  const CMat rows_n = chan.noise_normalized_rows();

  std::vector<CVec> ftilde(K);
  CMat M = Y;
  for (int k = 0; k < K; ++k) {
    const CVec u = rows_n.row(k).adjoint();
    const PsdSolver solver(M, pinv_cutoff);
    ftilde[k] = solver.solve(u);
    M += d(k) * u * u.adjoint();
  }

  RMat coupling(K, K);  // coupling(k,i) = |u_k^H ftilde_i|^2
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < K; ++i) {
      coupling(k, i) = std::norm((rows_n.row(k) * ftilde[i]).value());
    }
  }

  // Back substitution through the K linear SINR equations; b stays
  // nonnegative because every accumulated term is nonnegative.
  RVec b(K);
  for (int k = K - 1; k >= 0; --k) {
    double rhs = 1.0;
    for (int i = k + 1; i < K; ++i) rhs += coupling(k, i) * b(i);
    if (coupling(k, k) <= 0.0) {
      std::ostringstream msg;
      msg << "recover_from_dual: degenerate recovery, |u_" << k << "^H f_" << k << "| = 0";
      throw std::runtime_error(msg.str());
    }
    b(k) = per_user_gamma(k) * rhs / coupling(k, k);
  }

  CMat F_u(chan.rank, K);
  for (int k = 0; k < K; ++k) F_u.col(k) = std::sqrt(b(k)) * ftilde[k];
  return chan.rows * F_u;
}

BalancingResult solve_dpc_balancing(const EffectiveChannel& chan,
                                    const DpcBalancingOptions& opts) {
  const int r = chan.rank;
  const double floor = opts.eig_floor_scale / r;

  CMat Y = CMat::Identity(r, r) / static_cast<double>(r);
  BalancingResult result;

  FixedPointResult fp = fixed_point_inner(Y, chan, opts);
  result.inner_iteration_counts.push_back(fp.iterations);
  RVec d = fp.d;
  double gamma = fp.gamma;

  const auto project = [&](const CMat& x) {
    return floor_spectrum_unit_trace(project_psd_trace(hermitized(x)), floor);
  };

  // Spectral (Barzilai-Borwein) scaling of the gradient inside the
  // projection; the unit-scale residual P(Y - grad) - Y stays the stopping
  // criterion. The unscaled step crawls near the typically singular optima.
  CMat prev_y, prev_grad;
  double beta = 0.0;
  int iter = 0;
  for (; iter < opts.outer_cap; ++iter) {
    const CMat grad = gamma_gradient(Y, d, gamma, chan, opts.pinv_cutoff);
    const double delta_norm = (project(Y - grad) - Y).norm();
    const double min_eig = min_eigenvalue(Y);

    if (delta_norm < opts.outer_tol) {
      result.trace.push_back({iter, gamma, gamma, 0.0, delta_norm, min_eig});
      result.converged = true;
      break;
    }

    if (iter == 0) {
      beta = 1.0 / std::max(grad.norm(), 1e-12);
    } else {
      const CMat sdiff = Y - prev_y;
      const CMat gdiff = grad - prev_grad;
      const double sg = (sdiff.adjoint() * gdiff).trace().real();
      if (sg > 0.0 && std::isfinite(sg)) {
        beta = sdiff.squaredNorm() / sg;
      }
      beta = std::min(std::max(beta, 1e-12), 1e12);
    }
    prev_y = Y;
    prev_grad = grad;

    double alpha = 0.0;
    FixedPointResult trial;
    bool accepted = false;
    for (int attempt = 0; attempt < 4 && !accepted; ++attempt) {
      const CMat delta = project(Y - beta * grad) - Y;
      const double slope = (grad.adjoint() * delta).trace().real();  // <= -||delta||^2/beta
      alpha = 1.0;
      for (int halving = 0; halving <= opts.max_halvings; ++halving) {
        trial = fixed_point_inner(Y + alpha * delta, chan, opts, &d);
        result.inner_iteration_counts.push_back(trial.iterations);
        if (trial.gamma <= gamma + opts.armijo * alpha * slope + 1e-12) {
          accepted = true;
          Y += alpha * delta;
          break;
        }
        alpha *= opts.shrink;
        if (halving >= 4) break;  // shrink beta instead of alpha past this point
      }
      if (!accepted) beta *= 0.01;
    }
    if (!accepted) {
      result.trace.push_back({iter, gamma, gamma, 0.0, delta_norm, min_eig});
      break;  // no decrease left in any direction scale
    }
    result.trace.push_back({iter, gamma, gamma, alpha, delta_norm, min_eig});
    d = trial.d;
    gamma = trial.gamma;
  }

  result.iterations = iter;
  result.gamma = gamma;
  result.t = std::sqrt(gamma / (1.0 + gamma));
  result.d = d;
  result.Y = Y;
  result.F = recover_from_dual(Y, d, RVec::Constant(chan.users(), gamma), chan, opts.pinv_cutoff);
  return result;
}

double min_power_bisection(double gamma_target, const CMat& S_o, const ChannelMatrix& chan,
                           const BisectionOptions& opts) {
  if (!(gamma_target > 0.0)) {
    throw std::invalid_argument("min_power_bisection: gamma_target must be positive");
  }
  const auto gamma_at = [&](double power) {
    const RadarCovariance radar(S_o, power);
    const EffectiveChannel ec = effective_channel(chan, radar, opts.noise_power);
    return solve_dpc_balancing(ec, opts.solver).gamma;
  };

  // Single-user scaling gamma ~ P/sigma^2 seeds the bracket.
  const double guess = gamma_target * opts.noise_power;
  double lo = 1e-6 * guess;
  double hi = 1e3 * guess;

  double gamma_hi = gamma_at(hi);
  while (gamma_hi < gamma_target) {
    hi *= 2.0;
    if (hi > opts.power_cap) {
      throw std::runtime_error("min_power_bisection: target SINR unreachable within power cap");
    }
    gamma_hi = gamma_at(hi);
  }
  double gamma_lo = gamma_at(lo);
  while (gamma_lo > gamma_target && lo > 1e-30) {
    lo /= 4.0;
    gamma_lo = gamma_at(lo);
  }

  for (int it = 0; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gamma_mid = gamma_at(mid);
    if (std::abs(gamma_mid - gamma_target) < opts.rel_tol * gamma_target) {
      return mid;
    }
    if (gamma_mid < gamma_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw std::runtime_error("min_power_bisection: bisection failed to converge");
}

}  // namespace radcom
