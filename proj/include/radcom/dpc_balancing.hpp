#pragma once

#include "radcom/balancing_result.hpp"
#include "radcom/model.hpp"

namespace radcom {

struct DpcBalancingOptions {
  double inner_eps = 1e-12;   // fixed-point stop: sum |d_k - d_k'|^2
  int inner_cap = 500;
  double outer_tol = 1e-7;    // stop when ||Delta_Y||_F falls below this
  int outer_cap = 2000;
  double armijo = 1e-4;
  double shrink = 0.5;
  int max_halvings = 40;
  double eig_floor_scale = 1e-10;  // Y eigenvalue floor = scale / r
  double pinv_cutoff = 1e-12;
  double column_space_tol = 1e-8;  // residual test for u_k in C(Y)
};

struct FixedPointResult {
  RVec d;        // uplink powers, sum 1, zero on I(Y)
  double gamma;  // balanced SINR at this Y
  int iterations = 0;
  bool converged = false;
};

/// Inner minimization at fixed worst-case noise Y: normalized fixed-point
/// iteration on the uplink powers. Users whose u_k leaves the column space
/// of Y get d_k = 0. Throws when every user is outside C(Y).
/// `warm_start` (optional) seeds the iteration.
FixedPointResult fixed_point_inner(const CMat& Y, const EffectiveChannel& chan,
                                   const DpcBalancingOptions& opts = {},
                                   const RVec* warm_start = nullptr);

/// Gradient of gamma_o(Y) at a strictly positive definite Y, given the
/// fixed point (d, gamma) there. Built from the MMSE vectors
/// fhat_k = (Y + sum_{i<k} d_i u_i u_i^H)^{-1} u_k and the lower-triangular
/// sensitivity system A. Throws on a singular A.
CMat gamma_gradient(const CMat& Y, const RVec& d, double gamma, const EffectiveChannel& chan,
                    double pinv_cutoff = 1e-12);

/// SINR balancing under dirty-paper coding: gradient projection on the
/// trace-one PSD set for Y, fixed-point inner solves for d, then primal
/// recovery through the K linear SINR equations.
BalancingResult solve_dpc_balancing(const EffectiveChannel& chan,
                                    const DpcBalancingOptions& opts = {});

/// Primal recovery shared by the DPC balancing and sum-rate paths:
/// ftilde_k = (Y + sum_{i<k} d_i u_i u_i^H)^dagger u_k, scaled by sqrt(b_k)
/// with b solved from the K linear SINR equations at the given per-user
/// targets; returns F = U Sigma^{1/2} F_u.
CMat recover_from_dual(const CMat& Y, const RVec& d, const RVec& per_user_gamma,
                       const EffectiveChannel& chan, double pinv_cutoff = 1e-12);

struct BisectionOptions {
  double rel_tol = 1e-4;
  double power_cap = 1e9;
  int max_iterations = 200;
  double noise_power = 1.0;
  DpcBalancingOptions solver{};
};

/// Minimal transmit power P so that the DPC-balanced SINR reaches
/// gamma_target, found by bisection on the monotone map P -> gamma*(P).
double min_power_bisection(double gamma_target, const CMat& S_o, const ChannelMatrix& chan,
                           const BisectionOptions& opts = {});

}  // namespace radcom
