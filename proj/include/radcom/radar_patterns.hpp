#pragma once

#include <string>
#include <vector>

#include "radcom/model.hpp"

namespace radcom {

/// Uniform linear array steering vector at half-wavelength spacing:
/// element m = exp(j pi m sin theta), theta in degrees within [-90, 90].
CVec steering_vector(double theta_deg, int antennas);

enum class PatternKind { Omni, Phased, Multibeam };

std::string pattern_name(PatternKind kind);
PatternKind pattern_from_name(const std::string& name);

struct MultibeamParams {
  std::vector<double> centers_deg{-40.0, 0.0, 40.0};
  double width_deg = 10.0;
  double grid_step_deg = 1.0;
  int max_iterations = 5000;
  double tol = 1e-9;  // stop when ||Delta_S||_F falls below this
};

/// Normalized covariance shapes:
///   omni      S = I/M              (rank M, flat beampattern)
///   phased    S = 11^T / M         (rank 1, single beam at 0 degrees)
///   multibeam least-squares beampattern match to a 0/1 mask around the
///             target directions, solved by gradient projection on the
///             trace-one PSD set with the mask scale re-optimized in closed
///             form each iteration.
RadarCovariance make_covariance(PatternKind kind, int antennas, double power,
                                const MultibeamParams& params = {});

/// Transmit beampattern a(theta)^H R a(theta) sampled on a grid.
struct BeamGrid {
  RVec angles_deg;  // strictly increasing
  RVec values;      // real nonnegative
};

BeamGrid beampattern(const CMat& R, const RVec& angles_deg);

/// CSV rows `angle_deg,value_db`.
void write_beampattern_csv(const BeamGrid& grid, const std::string& path);

}  // namespace radcom
