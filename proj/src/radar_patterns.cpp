#include "radcom/radar_patterns.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "radcom/projections.hpp"

namespace radcom {

CVec steering_vector(double theta_deg, int antennas) {
  if (std::abs(theta_deg) > 90.0) {
    throw std::invalid_argument("steering_vector: theta must be within [-90, 90] degrees");
  }
  if (antennas < 1) {
    throw std::invalid_argument("steering_vector: need at least one antenna");
  }
  const double sin_theta = std::sin(theta_deg * M_PI / 180.0);
  CVec a(antennas);
  for (int m = 0; m < antennas; ++m) {
    const double phase = M_PI * m * sin_theta;
    a(m) = Complex(std::cos(phase), std::sin(phase));
  }
  return a;
}

std::string pattern_name(PatternKind kind) {
  switch (kind) {
    case PatternKind::Omni: return "omni";
    case PatternKind::Phased: return "phased";
    case PatternKind::Multibeam: return "multibeam";
  }
  return "unknown";
}

PatternKind pattern_from_name(const std::string& name) {
  if (name == "omni") return PatternKind::Omni;
  if (name == "phased") return PatternKind::Phased;
  if (name == "multibeam") return PatternKind::Multibeam;
  throw std::invalid_argument("unknown pattern kind: " + name);
}

namespace {

// Least-squares beampattern match over {S >= 0, tr S = 1}. The mask scale
// alpha has the closed form alpha = sum(m p) / sum(m^2) at each iterate.
CMat match_multibeam(int antennas, const MultibeamParams& params) {
  const int M = antennas;
  std::vector<CVec> steer;
  std::vector<double> mask;
  for (double angle = -90.0; angle <= 90.0 + 1e-9; angle += params.grid_step_deg) {
    steer.push_back(steering_vector(std::min(angle, 90.0), M));
    bool inside = false;
    for (double center : params.centers_deg) {
      if (std::abs(angle - center) <= 0.5 * params.width_deg) inside = true;
    }
    mask.push_back(inside ? 1.0 : 0.0);
  }
  const int grid = static_cast<int>(steer.size());
  double mask_sq = 0.0;
  for (double m : mask) mask_sq += m * m;

  // Lipschitz bound for the (quadratic) mismatch gradient.
  double lips = 0.0;
  for (const CVec& a : steer) lips += 2.0 * std::pow(a.squaredNorm(), 2);

  CMat S = CMat::Identity(M, M) / static_cast<double>(M);
  const auto mismatch = [&](const CMat& s, RVec& p) {
    p.resize(grid);
    for (int g = 0; g < grid; ++g) {
      p(g) = (steer[g].adjoint() * s * steer[g]).value().real();
    }
    double alpha = 0.0;
    for (int g = 0; g < grid; ++g) alpha += mask[g] * p(g);
    alpha = std::max(alpha / mask_sq, 0.0);
    double value = 0.0;
    for (int g = 0; g < grid; ++g) {
      const double e = p(g) - alpha * mask[g];
      value += e * e;
    }
    return std::pair<double, double>{value, alpha};
  };

  RVec p;
  auto [value, alpha] = mismatch(S, p);
  for (int it = 0; it < params.max_iterations; ++it) {
    CMat grad = CMat::Zero(M, M);
    for (int g = 0; g < grid; ++g) {
      grad += 2.0 * (p(g) - alpha * mask[g]) * (steer[g] * steer[g].adjoint());
    }
    const CMat delta = project_psd_trace(hermitized(S - grad / lips)) - S;
    if (delta.norm() < params.tol) return S;

    double step = 1.0;
    for (int halving = 0; halving < 40; ++halving) {
      RVec p_trial;
      auto [trial, alpha_trial] = mismatch(S + step * delta, p_trial);
      if (trial <= value) {
        S = hermitized(S + step * delta);
        value = trial;
        alpha = alpha_trial;
        p = p_trial;
        break;
      }
      step *= 0.5;
    }
  }
  std::ostringstream msg;
  msg << "make_covariance: multibeam matching did not converge, final mismatch " << value;
  throw std::runtime_error(msg.str());
}

}  // namespace

RadarCovariance make_covariance(PatternKind kind, int antennas, double power,
                                const MultibeamParams& params) {
  if (antennas < 1) {
    throw std::invalid_argument("make_covariance: need at least one antenna");
  }
  const int M = antennas;
  switch (kind) {
    case PatternKind::Omni:
      return RadarCovariance(CMat::Identity(M, M) / static_cast<double>(M), power);
    case PatternKind::Phased:
      return RadarCovariance(CMat::Ones(M, M) / static_cast<double>(M), power);
    case PatternKind::Multibeam:
      return RadarCovariance(match_multibeam(M, params), power);
  }
  throw std::invalid_argument("make_covariance: unknown pattern kind");
}

BeamGrid beampattern(const CMat& R, const RVec& angles_deg) {
  if (R.rows() != R.cols()) {
    throw std::invalid_argument("beampattern: covariance must be square");
  }
  for (Eigen::Index i = 1; i < angles_deg.size(); ++i) {
    if (angles_deg(i) <= angles_deg(i - 1)) {
      throw std::invalid_argument("beampattern: grid must be strictly increasing");
    }
  }
  BeamGrid grid;
  grid.angles_deg = angles_deg;
  grid.values = RVec(angles_deg.size());
  for (Eigen::Index i = 0; i < angles_deg.size(); ++i) {
    const CVec a = steering_vector(angles_deg(i), static_cast<int>(R.rows()));
    grid.values(i) = (a.adjoint() * R * a).value().real();
  }
  return grid;
}

void write_beampattern_csv(const BeamGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_beampattern_csv: cannot open " + path);
  }
  out << "angle_deg,value_db\n";
  for (Eigen::Index i = 0; i < grid.angles_deg.size(); ++i) {
    const double value = std::max(grid.values(i), 1e-300);
    out << grid.angles_deg(i) << "," << 10.0 * std::log10(value) << "\n";
  }
}

}  // namespace radcom
