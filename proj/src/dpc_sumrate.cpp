#include "radcom/dpc_sumrate.hpp"

#include <cmath>
#include <stdexcept>

#include "radcom/dpc_balancing.hpp"
#include "radcom/projections.hpp"

namespace radcom {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// log|Y + sum_k d_k u_k u_k^H| - log|Y| in nats, plus the full matrix.
struct MacState {
  CMat full;       // Y + sum d u u^H
  double rate_nats;
};

MacState mac_state(const CMat& Y, const RVec& d, const CMat& rows_n) {
  MacState st;
  st.full = Y;
  for (Eigen::Index k = 0; k < rows_n.rows(); ++k) {
    st.full += d(k) * (rows_n.row(k).adjoint() * rows_n.row(k));
  }
  st.full = hermitized(st.full);
  st.rate_nats = logdet_pd(st.full) - logdet_pd(Y);
  return st;
}

}  // namespace

std::pair<RVec, double> mac_mmse_sinr_and_rate(const CMat& Y, const RVec& d,
                                               const EffectiveChannel& chan) {
  const int K = chan.users();
  const int r = chan.rank;
  if (Y.rows() != r || Y.cols() != r || d.size() != K) {
    throw std::invalid_argument("mac_mmse_sinr_and_rate: dimension mismatch");
  }
  if ((d.array() < 0.0).any()) {
    throw std::invalid_argument("mac_mmse_sinr_and_rate: d must be nonnegative");
  }
  if (min_eigenvalue(Y) <= 0.0) {
    throw std::invalid_argument("mac_mmse_sinr_and_rate: Y is singular, rate unbounded");
  }
  const CMat rows_n = chan.noise_normalized_rows();

  RVec sinrs(K);
  CMat M = Y;
  for (int k = 0; k < K; ++k) {
    const CVec u = rows_n.row(k).adjoint();
    const Eigen::LLT<CMat> llt(M);
    sinrs(k) = d(k) * (u.adjoint() * llt.solve(u)).value().real();
    M += d(k) * u * u.adjoint();
  }
  const double rate_bits = mac_state(Y, d, rows_n).rate_nats / kLn2;
  return {sinrs, rate_bits};
}

SaddlePoint solve_saddle_extragradient(const EffectiveChannel& chan,
                                       const ExtragradientOptions& opts) {
  const int K = chan.users();
  const int r = chan.rank;
  const double floor = opts.eig_floor_scale / r;
  const CMat rows_n = chan.noise_normalized_rows();
  const RVec ones = RVec::Ones(K);
  std::vector<CMat> outers(K);
  for (int k = 0; k < K; ++k) outers[k] = rows_n.row(k).adjoint() * rows_n.row(k);

  SaddlePoint out;

  // Projection onto the trace-one PSD set with the eigenvalue floor applied
  // on the same eigendecomposition.
  const auto project_y = [&](const CMat& x) {
    const HermitianEig eig = eig_hermitian(hermitized(x));
    RVec vals = project_weighted_simplex(eig.values, RVec::Ones(r));
    if (vals.minCoeff() < floor) out.floor_engaged = true;
    vals = vals.cwiseMax(floor);
    vals /= vals.sum();
    return CMat(eig.vectors * vals.asDiagonal() * eig.vectors.adjoint());
  };

  struct Grads {
    CMat y;       // (Y + sum d u u^H)^{-1} - Y^{-1}
    RVec d;       // u_k^H (Y + sum d u u^H)^{-1} u_k
    double rate;  // nats
  };
  const auto grads = [&](const CMat& Y, const RVec& d) {
    Grads g;
    CMat full = Y;
    for (int k = 0; k < K; ++k) full += d(k) * outers[k];
    full = hermitized(full);
    const Eigen::LLT<CMat> llt_full(full);
    const Eigen::LLT<CMat> llt_y(Y);
    const CMat eye = CMat::Identity(r, r);
    const CMat full_inv = llt_full.solve(eye);
    g.y = hermitized(full_inv - llt_y.solve(eye));
    g.d = RVec(K);
    for (int k = 0; k < K; ++k) {
      g.d(k) = (rows_n.row(k) * full_inv * rows_n.row(k).adjoint()).value().real();
    }
    g.rate = logdet_pd(full) - logdet_pd(Y);
    return g;
  };

  CMat Y = CMat::Identity(r, r) / static_cast<double>(r);
  RVec d = RVec::Constant(K, 1.0 / K);
  double tau = opts.step;
  double prev_res = std::numeric_limits<double>::infinity();
  int increases = 0;

  int iter = 0;
  for (; iter < opts.cap; ++iter) {
    const Grads g = grads(Y, d);
    const double res_y = (project_y(Y - g.y) - Y).norm();
    const double res_d = (project_weighted_simplex(d + g.d, ones) - d).norm();
    const double res = std::max(res_y, res_d);
    out.trace.push_back({iter, g.rate / kLn2, res_y, res_d});
    out.residual = res;

    if (res < opts.tol) {
      out.converged = true;
      break;
    }
    if (res > prev_res) {
      if (++increases >= opts.stall_window) {
        tau *= 0.5;
        increases = 0;
      }
    } else {
      increases = 0;
    }
    prev_res = res;

    // Predictor, then corrector from the predictor's gradients.
    const CMat Y_mid = project_y(Y - tau * g.y);
    const RVec d_mid = project_weighted_simplex(d + tau * g.d, ones);
    const Grads g_mid = grads(Y_mid, d_mid);
    Y = project_y(Y - tau * g_mid.y);
    d = project_weighted_simplex(d + tau * g_mid.d, ones);
  }

  out.iterations = iter;
  out.Y = Y;
  out.d = d;
  auto [sinrs, rate_bits] = mac_mmse_sinr_and_rate(Y, d, chan);
  out.uplink_sinrs = sinrs;
  out.rate_bits = rate_bits;
  return out;
}

SatoSolution solve_sato_barrier(const EffectiveChannel& chan, const SatoOptions& opts) {
  const int K = chan.users();
  const int r = chan.rank;
  const CMat rows_n = chan.noise_normalized_rows();
  const CMat eye = CMat::Identity(r, r);
  const int n_params = r * r;

  // Orthonormal real parameterization of Hermitian matrices.
  const auto to_params = [&](const CMat& w) {
    RVec p(n_params);
    int q = 0;
    for (int i = 0; i < r; ++i) p(q++) = w(i, i).real();
    const double rt2 = std::sqrt(2.0);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        p(q++) = rt2 * w(i, j).real();
        p(q++) = rt2 * w(i, j).imag();
      }
    }
    return p;
  };
  const auto from_params = [&](const RVec& p) {
    CMat w = CMat::Zero(r, r);
    int q = 0;
    for (int i = 0; i < r; ++i) w(i, i) = p(q++);
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        const double re = p(q++) * inv_rt2;
        const double im = p(q++) * inv_rt2;
        w(i, j) = Complex(re, im);
        w(j, i) = Complex(re, -im);
      }
    }
    return w;
  };

  const auto constraints = [&](const CMat& z) {
    RVec c(K);
    for (int k = 0; k < K; ++k) {
      c(k) = (rows_n.row(k) * z * rows_n.row(k).adjoint()).value().real();
    }
    return c;
  };

  // Strictly feasible start: Z = eps I with max_k u_k^H Z u_k <= 1/2.
  double max_row = 0.0;
  for (int k = 0; k < K; ++k) max_row = std::max(max_row, rows_n.row(k).squaredNorm());
  if (!(max_row > 0.0)) {
    throw std::invalid_argument("solve_sato_barrier: all users have zero effective channel");
  }
  CMat Z = (0.5 / max_row) * eye;

  const auto barrier_value = [&](const CMat& z, double mu) {
    const RVec c = constraints(z);
    if ((c.array() >= 1.0).any()) return std::numeric_limits<double>::infinity();
    Eigen::LLT<CMat> llt(hermitized(z));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    double val = logdet_pd(eye + z) - logdet_pd(z);
    for (int k = 0; k < K; ++k) val -= mu * std::log(1.0 - c(k));
    return val;
  };

  std::vector<CMat> outers(K);
  for (int k = 0; k < K; ++k) outers[k] = rows_n.row(k).adjoint() * rows_n.row(k);

  SatoSolution out;
  double mu = opts.mu0;
  double grad_norm = 0.0;
  bool all_ok = true;
  while (true) {
    const double stage_tol = std::max(opts.newton_tol, 1e-4 * mu);
    double best_grad = std::numeric_limits<double>::infinity();
    CMat best_z = Z;
    int no_progress = 0;
    for (int step = 0; step < opts.newton_cap; ++step) {
      const RVec c = constraints(Z);
      const Eigen::LLT<CMat> llt_z(Z);
      const Eigen::LLT<CMat> llt_iz(eye + Z);
      const CMat z_inv = llt_z.solve(eye);
      const CMat iz_inv = llt_iz.solve(eye);

      CMat grad = iz_inv - z_inv;
      for (int k = 0; k < K; ++k) {
        grad += (mu / (1.0 - c(k))) * outers[k];
      }
      grad = hermitized(grad);
      grad_norm = grad.norm();
      if (grad_norm < best_grad) {
        best_grad = grad_norm;
        best_z = Z;
        no_progress = 0;
      } else if (++no_progress >= 3) {
        Z = best_z;  // gradient stopped improving, precision floor
        break;
      }
      if (grad_norm < stage_tol) break;

      // Newton system over the real Hermitian parameterization.
      RMat hess(n_params, n_params);
      for (int p = 0; p < n_params; ++p) {
        RVec unit = RVec::Zero(n_params);
        unit(p) = 1.0;
        const CMat e = from_params(unit);
        CMat he = z_inv * e * z_inv - iz_inv * e * iz_inv;
        for (int k = 0; k < K; ++k) {
          const double quad = (rows_n.row(k) * e * rows_n.row(k).adjoint()).value().real();
          he += (mu * quad / ((1.0 - c(k)) * (1.0 - c(k)))) * outers[k];
        }
        hess.col(p) = to_params(hermitized(he));
      }
      const RVec rhs = -to_params(grad);
      RVec step_params = hess.ldlt().solve(rhs);
      if (!step_params.allFinite()) {
        step_params = rhs;  // gradient fallback
      }
      const CMat delta = from_params(step_params);
      const double slope = to_params(grad).dot(step_params);
      const double decrement = -slope;
      const double base = barrier_value(Z, mu);

      double t = 1.0;
      bool moved = false;
      if (decrement > 1e-8 * (1.0 + std::abs(base))) {
        // Damped phase: sufficient decrease.
        for (int halving = 0; halving <= opts.max_halvings; ++halving) {
          const double trial = barrier_value(Z + t * delta, mu);
          if (std::isfinite(trial) && trial <= base + 0.25 * t * slope) {
            moved = true;
            break;
          }
          t *= 0.5;
        }
      } else {
        // Quadratic phase: value differences are at rounding level, only
        // back off for feasibility.
        for (int halving = 0; halving <= opts.max_halvings; ++halving) {
          if (std::isfinite(barrier_value(Z + t * delta, mu))) {
            moved = true;
            break;
          }
          t *= 0.5;
        }
      }
      ++out.newton_steps;
      if (!moved) {
        all_ok = false;
        break;
      }
      Z = hermitized(Z + t * delta);
      (void)decrement;
    }
    if (mu <= opts.mu_min * (1.0 + 1e-12)) break;
    mu = std::max(mu * opts.mu_factor, opts.mu_min);
  }

  const RVec c = constraints(Z);
  out.Z = Z;
  out.phi = RVec(K);
  for (int k = 0; k < K; ++k) out.phi(k) = mu / (1.0 - c(k));
  out.bound_bits = (logdet_pd(eye + Z) - logdet_pd(Z)) / kLn2;
  {
    // Residual of the stationarity equation at the returned (Z, phi).
    const Eigen::LLT<CMat> llt_z(Z);
    const Eigen::LLT<CMat> llt_iz(eye + Z);
    CMat res = llt_z.solve(eye) - llt_iz.solve(eye);
    for (int k = 0; k < K; ++k) res -= out.phi(k) * outers[k];
    out.stationarity_residual = res.norm();
  }
  out.converged = all_ok;
  (void)grad_norm;
  return out;
}

KktVerification verify_kkt_theorem1(const SatoSolution& sato, const EffectiveChannel& chan) {
  const int K = chan.users();
  const int r = chan.rank;
  const CMat rows_n = chan.noise_normalized_rows();
  const CMat eye = CMat::Identity(r, r);

  const double eta = sato.phi.sum();
  if (!(eta > 0.0)) {
    throw std::invalid_argument("verify_kkt_theorem1: nonpositive multiplier sum");
  }
  const RVec d = sato.phi / eta;
  const Eigen::LLT<CMat> llt(hermitized(sato.Z + eye));
  const CMat Y = hermitized(llt.solve(eye) / eta);

  KktVerification out;
  KktReport& rep = out.report;

  const MacState st = mac_state(Y, d, rows_n);
  const Eigen::LLT<CMat> llt_full(st.full);
  const Eigen::LLT<CMat> llt_y(Y);
  const CMat full_inv = llt_full.solve(eye);

  // (a) matrix stationarity with nu = eta
  rep.stationarity = (full_inv - llt_y.solve(eye) + eta * eye).norm();

  // (b) per-user condition with multipliers varphi_k = eta (1 - u_k^H Z u_k)
  RVec varphi(K);
  double worst_user = 0.0;
  for (int k = 0; k < K; ++k) {
    const double c_k = (rows_n.row(k) * sato.Z * rows_n.row(k).adjoint()).value().real();
    varphi(k) = eta * (1.0 - c_k);
    const double quad = (rows_n.row(k) * full_inv * rows_n.row(k).adjoint()).value().real();
    worst_user = std::max(worst_user, std::abs(quad - eta + varphi(k)));
  }
  rep.per_user = worst_user;

  // (c) trace and positivity
  rep.trace_error = std::abs(Y.trace().real() - 1.0);

  // (d) complementary slackness
  double worst_comp = 0.0;
  for (int k = 0; k < K; ++k) {
    worst_comp = std::max(worst_comp, std::abs(varphi(k) * d(k)));
  }
  rep.complementary = worst_comp;

  const double tol = 1e-6;
  rep.ok = true;
  if (rep.stationarity >= tol) {
    rep.ok = false;
    rep.violated = "stationarity (58a)";
  } else if (rep.per_user >= tol) {
    rep.ok = false;
    rep.violated = "per-user condition (58b)";
  } else if (rep.trace_error >= tol || min_eigenvalue(Y) <= 0.0) {
    rep.ok = false;
    rep.violated = "trace/positivity (58c)";
  } else if (rep.complementary >= tol || varphi.minCoeff() < -tol || d.minCoeff() < 0.0) {
    rep.ok = false;
    rep.violated = "complementary slackness (58d)";
  }

  out.saddle.Y = Y;
  out.saddle.d = d;
  auto [sinrs, rate_bits] = mac_mmse_sinr_and_rate(Y, d, chan);
  out.saddle.uplink_sinrs = sinrs;
  out.saddle.rate_bits = rate_bits;
  out.saddle.converged = rep.ok;
  return out;
}

CMat recover_sumrate_precoder(const SaddlePoint& sp, const EffectiveChannel& chan) {
  if (sp.uplink_sinrs.size() != chan.users()) {
    throw std::invalid_argument("recover_sumrate_precoder: saddle point has no uplink SINRs");
  }
  if (min_eigenvalue(sp.Y) <= 0.0) {
    throw std::invalid_argument("recover_sumrate_precoder: Y must be positive definite");
  }
  return recover_from_dual(sp.Y, sp.d, sp.uplink_sinrs, chan);
}

}  // namespace radcom
