#pragma once

// Independent reference implementations used only by tests. Each one checks a
// production path through a different route: exhaustive active-set
// enumeration for the projections, finite differences for gradients, grid
// search for the small duals.

#include <cstdint>
#include <functional>
#include <random>

#include "radcom/linalg.hpp"
#include "radcom/model.hpp"

namespace radcom::oracle {

/// Projection onto {x >= 0, s^T x = 1} by enumerating all 2^K - 1 active
/// sets and keeping the feasible candidate closest to d.
RVec simplex_projection_bruteforce(const RVec& d, const RVec& s);

/// Central finite difference of a scalar function of a real vector.
RVec finite_difference_gradient(const std::function<double(const RVec&)>& f, const RVec& x,
                                double step = 1e-6);

/// Central finite difference of f along a matrix direction E.
double finite_difference_directional(const std::function<double(const CMat&)>& f, const CMat& x,
                                     const CMat& direction, double step = 1e-6);

/// TBF dual objective minimized by brute force over a grid on the weighted
/// simplex (K = 2 only): returns min over d of tr((D D^H)^{1/2}).
double tbf_dual_grid_search(const EffectiveChannel& chan, double step);

/// Balanced DPC SINR for R_h = diag(a, b) by exhaustive search over real
/// lower-triangular F with F F^H <= R_h.
double dpc_diag2_grid_search(double a, double b, double sigma2, int grid);

/// Random Hermitian matrix with entries of scale 1, seeded.
CMat random_hermitian(int n, std::uint64_t seed);

/// Random Hermitian trace-zero direction of unit Frobenius norm.
CMat random_trace_zero_direction(int n, std::uint64_t seed);

/// Random complex matrix, entries CN(0,1), seeded (independent of the
/// harness channel generator).
CMat random_complex(int rows, int cols, std::uint64_t seed);

/// Random point strictly inside {d > 0, s^T d = 1}.
RVec random_interior_simplex(const RVec& s, std::uint64_t seed);

/// Random feasible effective precoder F_u with F_u F_u^H <= I (scaled).
CMat random_feasible_fu(int r, int cols, std::uint64_t seed, double margin = 0.9);

}  // namespace radcom::oracle
