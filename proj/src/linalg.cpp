#include "radcom/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace radcom {

bool is_hermitian(const CMat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= tol * scale;
}

CMat hermitized(const CMat& a) { return 0.5 * (a + a.adjoint()); }

HermitianEig eig_hermitian(const CMat& a, double tol) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("eig_hermitian: matrix is not square");
  }
  if (!is_hermitian(a, tol)) {
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitized(a));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigendecomposition failed");
  }
  const Eigen::Index n = a.rows();
  HermitianEig out;
  out.values = RVec(n);
  out.vectors = CMat(n, n);
  // Eigen returns ascending order; flip.
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = es.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  return out;
}

double min_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitized(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitized(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

CMat sqrt_psd(const CMat& a) {
  const HermitianEig eig = eig_hermitian(a);
  RVec roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

CMat pinv_psd(const CMat& a, double rel_cutoff) {
  const HermitianEig eig = eig_hermitian(a);
  const double cutoff = rel_cutoff * std::max(eig.values.maxCoeff(), 0.0);
  RVec inv = RVec::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff && eig.values(i) > 0.0) inv(i) = 1.0 / eig.values(i);
  }
  return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
}

CMat inv_sqrt_psd(const CMat& a, double rel_cutoff) {
  const HermitianEig eig = eig_hermitian(a);
  const double cutoff = rel_cutoff * std::max(eig.values.maxCoeff(), 0.0);
  RVec inv = RVec::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff && eig.values(i) > 0.0) inv(i) = 1.0 / std::sqrt(eig.values(i));
  }
  return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
}

double logdet_pd(const CMat& a) {
  Eigen::LLT<CMat> llt(hermitized(a));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("logdet_pd: matrix is not positive definite");
  }
  double sum = 0.0;
  const CMat l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i).real());
  return 2.0 * sum;
}

CMat floor_spectrum_unit_trace(const CMat& a, double floor) {
  const HermitianEig eig = eig_hermitian(a);
  RVec vals = eig.values.cwiseMax(floor);
  vals /= vals.sum();
  return eig.vectors * vals.asDiagonal() * eig.vectors.adjoint();
}

PsdSolver::PsdSolver(const CMat& m, double rel_cutoff) {
  llt_.compute(hermitized(m));
  if (llt_.info() == Eigen::Success) {
    // Guard against a semi-definite matrix slipping through with tiny pivots.
    const CMat l = llt_.matrixL();
    double dmin = l(0, 0).real(), dmax = l(0, 0).real();
    for (Eigen::Index i = 1; i < l.rows(); ++i) {
      dmin = std::min(dmin, l(i, i).real());
      dmax = std::max(dmax, l(i, i).real());
    }
    pd_ = dmin > 0.0 && dmin * dmin > rel_cutoff * dmax * dmax;
  }
  if (!pd_) pinv_ = pinv_psd(m, rel_cutoff);
}

CVec PsdSolver::solve(const CVec& b) const {
  if (pd_) return llt_.solve(b);
  return pinv_ * b;
}

}  // namespace radcom
