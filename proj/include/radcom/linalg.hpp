#pragma once

#include <Eigen/Dense>
#include <complex>

namespace radcom {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
struct HermitianEig {
  RVec values;   // descending
  CMat vectors;  // column j pairs with values(j)
};

bool is_hermitian(const CMat& a, double tol = 1e-10);

/// (A + A^H)/2. Cheap cleanup for matrices that are Hermitian up to roundoff.
CMat hermitized(const CMat& a);

/// Throws std::invalid_argument if `a` is not square or not Hermitian within `tol`.
HermitianEig eig_hermitian(const CMat& a, double tol = 1e-8);

double min_eigenvalue(const CMat& a);
double max_eigenvalue(const CMat& a);

/// PSD square root. Eigenvalues below zero are clamped to zero; callers that
/// must reject indefinite input check min_eigenvalue first.
CMat sqrt_psd(const CMat& a);

/// Moore-Penrose inverse of a Hermitian PSD matrix. Eigenvalues at or below
/// rel_cutoff * lambda_max are treated as zero.
CMat pinv_psd(const CMat& a, double rel_cutoff = 1e-12);

/// Pseudo inverse square root of a Hermitian PSD matrix (same cutoff rule).
CMat inv_sqrt_psd(const CMat& a, double rel_cutoff = 1e-12);

/// log det of a Hermitian positive definite matrix (natural log, via LLT).
/// Throws std::invalid_argument when the factorization fails.
double logdet_pd(const CMat& a);

/// Clamps eigenvalues from below at `floor` and rescales to unit trace.
/// Keeps gradient-projection iterates strictly positive definite.
CMat floor_spectrum_unit_trace(const CMat& a, double floor);

/// Applies M^{-1} (positive definite fast path via LLT) or M^dagger
/// (pseudo-inverse path) to vectors. The path is fixed at construction.
class PsdSolver {
 public:
  PsdSolver(const CMat& m, double rel_cutoff = 1e-12);
  CVec solve(const CVec& b) const;
  bool positive_definite() const { return pd_; }

 private:
  bool pd_ = false;
  Eigen::LLT<CMat> llt_;
  CMat pinv_;
};

}  // namespace radcom
