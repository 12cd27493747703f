#pragma once

#include <utility>

#include "radcom/balancing_result.hpp"
#include "radcom/model.hpp"

namespace radcom {

struct TbfOptions {
  double tol = 1e-8;        // stop when ||Delta_d||_2 falls below this
  int max_iterations = 5000;
  double armijo = 1e-4;
  double shrink = 0.5;
  int max_halvings = 40;
};

/// Dual objective h(d) = tr((D D^H)^{1/2}) (the nuclear norm of D, with
/// D = [d_1 u_1, ..., d_K u_K]) and its gradient
///   [grad]_k = d_k^{-1} [(D^H D)^{1/2}]_kk.
/// Requires d > 0 strictly; the gradient is undefined on the boundary.
std::pair<double, RVec> dual_objective_and_gradient(const RVec& d, const EffectiveChannel& chan);

/// SINR balancing for transmit beamforming via gradient projection on the
/// weighted simplex {d >= 0, s^T d = 1}. Recovers the effective precoder
/// F = U Sigma^{1/2} F_u from the converged dual point.
BalancingResult solve_tbf_balancing(const EffectiveChannel& chan, const TbfOptions& opts = {});

}  // namespace radcom
