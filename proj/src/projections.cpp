#include "radcom/projections.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace radcom {

RVec project_weighted_simplex(const RVec& d, const RVec& s) {
  const Eigen::Index n = d.size();
  if (s.size() != n) {
    throw std::invalid_argument("project_weighted_simplex: size mismatch");
  }
  if (n == 0) {
    throw std::invalid_argument("project_weighted_simplex: empty input");
  }
  if ((s.array() <= 0.0).any()) {
    throw std::invalid_argument("project_weighted_simplex: weights must be positive");
  }
  if (!d.allFinite()) {
    throw std::invalid_argument("project_weighted_simplex: non-finite input");
  }

  // Sort indices by ratio d_k/s_k ascending; ties keep original index order.
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return d(a) / s(a) < d(b) / s(b);
  });

  // Suffix sums over the sorted order; start with everything active.
  double sd = 0.0, ss = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) sd += s(k) * d(k), ss += s(k) * s(k);

  double v = 0.0;
  Eigen::Index j = 0;
  for (; j < n; ++j) {
    v = (sd - 1.0) / ss;
    const Eigen::Index idx = order[static_cast<size_t>(j)];
    if (v < d(idx) / s(idx) || j == n - 1) break;  // smallest active entry stays positive
    sd -= s(idx) * d(idx);
    ss -= s(idx) * s(idx);
  }

  RVec x = (d - v * s).cwiseMax(0.0);
  // The last-active case x_n = 1/s_n is always feasible, so the loop exits.
  for (Eigen::Index k = 0; k < j; ++k) x(order[static_cast<size_t>(k)]) = 0.0;
  return x;
}

CMat project_psd_trace(const CMat& y) {
  if (y.rows() != y.cols() || y.rows() == 0) {
    throw std::invalid_argument("project_psd_trace: matrix must be square and non-empty");
  }
  if (!is_hermitian(y, 1e-10)) {
    throw std::invalid_argument("project_psd_trace: matrix is not Hermitian within 1e-10");
  }
  const HermitianEig eig = eig_hermitian(y);
  const RVec ones = RVec::Ones(eig.values.size());
  const RVec projected = project_weighted_simplex(eig.values, ones);
  return eig.vectors * projected.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace radcom
