#pragma once

#include <vector>

#include "radcom/linalg.hpp"

namespace radcom {

/// One row of a solver convergence trace. The TBF dual fills `objective`
/// with h(d); the DPC dual fills it with the current gamma and records the
/// smallest eigenvalue of Y.
struct SolveTraceRow {
  int iteration = 0;
  double objective = 0.0;
  double gamma = 0.0;
  double step = 0.0;
  double delta_norm = 0.0;
  double min_eig_y = 0.0;
};

/// Outcome of an SINR balancing solve (TBF or DPC regime).
struct BalancingResult {
  double gamma = 0.0;  // balanced SINR, linear
  double t = 0.0;      // sqrt(gamma / (1 + gamma))
  CMat F;              // K x K effective precoder
  RVec d;              // dual vector at convergence
  CMat Y;              // dual matrix at convergence (r x r)
  int iterations = 0;
  bool converged = false;
  std::vector<SolveTraceRow> trace;
  std::vector<int> inner_iteration_counts;  // DPC only: fixed-point iterations per call
};

}  // namespace radcom
