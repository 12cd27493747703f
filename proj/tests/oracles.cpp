#include "oracles.hpp"

#include <limits>
#include <stdexcept>

namespace radcom::oracle {

RVec simplex_projection_bruteforce(const RVec& d, const RVec& s) {
  const int n = static_cast<int>(d.size());
  if (n > 20) throw std::invalid_argument("bruteforce oracle: too many dimensions");
  double best = std::numeric_limits<double>::infinity();
  RVec best_x = RVec::Zero(n);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    // Equality-constrained least squares on the active set, then feasibility.
    double sd = 0.0, ss = 0.0;
    for (int k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        sd += s(k) * d(k);
        ss += s(k) * s(k);
      }
    }
    const double nu = (sd - 1.0) / ss;
    RVec x = RVec::Zero(n);
    bool feasible = true;
    for (int k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        x(k) = d(k) - nu * s(k);
        if (x(k) < -1e-12) feasible = false;
      }
    }
    if (!feasible) continue;
    const double dist = (d - x).squaredNorm();
    if (dist < best) {
      best = dist;
      best_x = x.cwiseMax(0.0);
    }
  }
  return best_x;
}

RVec finite_difference_gradient(const std::function<double(const RVec&)>& f, const RVec& x,
                                double step) {
  RVec grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RVec hi = x, lo = x;
    hi(i) += step;
    lo(i) -= step;
    grad(i) = (f(hi) - f(lo)) / (2.0 * step);
  }
  return grad;
}

double finite_difference_directional(const std::function<double(const CMat&)>& f, const CMat& x,
                                     const CMat& direction, double step) {
  return (f(x + step * direction) - f(x - step * direction)) / (2.0 * step);
}

double tbf_dual_grid_search(const EffectiveChannel& chan, double step) {
  if (chan.users() != 2) throw std::invalid_argument("tbf grid oracle: K = 2 only");
  const auto objective = [&](const RVec& d) {
    CMat D(chan.rank, 2);
    D.col(0) = d(0) * chan.u(0);
    D.col(1) = d(1) * chan.u(1);
    Eigen::JacobiSVD<CMat> svd(D);
    return svd.singularValues().sum();
  };
  // Parameterize the segment s0 d0 + s1 d1 = 1 by w in [0, 1].
  double best = std::numeric_limits<double>::infinity();
  for (double w = 0.0; w <= 1.0 + 1e-12; w += step) {
    RVec d(2);
    d(0) = w / chan.s(0);
    d(1) = (1.0 - w) / chan.s(1);
    best = std::min(best, objective(d));
  }
  return best;
}

double dpc_diag2_grid_search(double a, double b, double sigma2, int grid) {
  // F = [[f00, 0], [f10, f11]] real; F F^H <= diag(a, b).
  const double fa = std::sqrt(a), fb = std::sqrt(b);
  double best = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double f00 = fa * i / grid;
    for (int j = -grid; j <= grid; ++j) {
      const double f10 = fb * j / grid;
      for (int k = 0; k <= grid; ++k) {
        const double f11 = fb * k / grid;
        // PSD check for diag(a,b) - F F^H (2x2).
        const double m00 = a - f00 * f00;
        const double m11 = b - f10 * f10 - f11 * f11;
        const double m01 = -f00 * f10;
        if (m00 < 0 || m11 < 0 || m00 * m11 - m01 * m01 < 0) continue;
        const double sinr0 = f00 * f00 / sigma2;
        const double sinr1 = f11 * f11 / sigma2;
        best = std::max(best, std::min(sinr0, sinr1));
      }
    }
  }
  return best;
}

CMat random_complex(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  return m;
}

CMat random_hermitian(int n, std::uint64_t seed) {
  const CMat a = random_complex(n, n, seed);
  return 0.5 * (a + a.adjoint());
}

CMat random_trace_zero_direction(int n, std::uint64_t seed) {
  CMat e = random_hermitian(n, seed);
  e -= (e.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
  return e / e.norm();
}

RVec random_interior_simplex(const RVec& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.2, 1.0);
  RVec d(s.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = uniform(rng);
  d /= s.dot(d);
  return d;
}

CMat random_feasible_fu(int r, int cols, std::uint64_t seed, double margin) {
  CMat f = random_complex(r, cols, seed);
  Eigen::JacobiSVD<CMat> svd(f);
  f *= margin / svd.singularValues().maxCoeff();
  return f;
}

}  // namespace radcom::oracle
