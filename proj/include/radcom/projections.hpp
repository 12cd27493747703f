#pragma once

#include "radcom/linalg.hpp"

namespace radcom {

/// Euclidean projection of d onto {x >= 0, s^T x = 1} with weights s > 0.
///
/// Exact finite-step method: sort the ratios r_k = d_k / s_k ascending, then
/// search the active suffix {j..K}. For a candidate suffix the multiplier is
///   v = (sum_active s_k d_k - 1) / (sum_active s_k^2),
/// and the projection is x_k = max(d_k - v s_k, 0). The suffix is grown by
/// dropping the smallest-ratio coordinate until all active entries are
/// nonnegative; at most K passes.
RVec project_weighted_simplex(const RVec& d, const RVec& s);

/// Euclidean projection of a Hermitian matrix onto {X >= 0, tr X = 1}.
/// Reduces to the unit-weight simplex projection of the eigenvalues.
/// Throws std::invalid_argument when Y is not Hermitian within 1e-10.
CMat project_psd_trace(const CMat& y);

}  // namespace radcom
