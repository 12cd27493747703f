#pragma once

#include <string>
#include <utility>
#include <vector>

#include "radcom/model.hpp"

namespace radcom {

struct SaddleTraceRow {
  int iteration = 0;
  double rate_bits = 0.0;
  double residual_y = 0.0;
  double residual_d = 0.0;
};

/// Saddle point of the dual MAC problem: worst-case noise Y (trace 1),
/// uplink powers d (simplex), sum rate in bits per channel use, and the
/// per-user uplink SINRs.
struct SaddlePoint {
  CMat Y;
  RVec d;
  double rate_bits = 0.0;
  RVec uplink_sinrs;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  bool floor_engaged = false;
  std::vector<SaddleTraceRow> trace;
};

/// Uplink MMSE SINRs under successive cancellation and the sum rate, both
/// from the same (Y, d). The two agree through the determinant identity;
/// rejects a singular Y (the rate is unbounded there).
std::pair<RVec, double> mac_mmse_sinr_and_rate(const CMat& Y, const RVec& d,
                                               const EffectiveChannel& chan);

struct ExtragradientOptions {
  double step = 0.05;
  double tol = 1e-7;  // stationarity residual, unit-step projections
  int cap = 20000;
  int stall_window = 10;  // consecutive residual increases before halving step
  double eig_floor_scale = 1e-10;
};

/// Extragradient solver for min_Y max_d log|Y + sum d_k u_k u_k^H| - log|Y|
/// over the trace-one PSD set and the simplex.
SaddlePoint solve_saddle_extragradient(const EffectiveChannel& chan,
                                       const ExtragradientOptions& opts = {});

struct SatoOptions {
  double mu0 = 1.0;
  double mu_factor = 0.1;
  double mu_min = 1e-9;
  double newton_tol = 1e-9;  // gradient norm at the final stage
  int newton_cap = 200;
  int max_halvings = 60;
};

/// Solution of the worst-case-noise determinant program
///   min log|I + Z| - log|Z|  s.t.  u_k^H Z u_k <= 1, Z > 0,
/// solved by a log-barrier Newton path. `phi` holds the constraint
/// multipliers recovered from the final barrier stage.
struct SatoSolution {
  CMat Z;
  RVec phi;
  double bound_bits = 0.0;
  double stationarity_residual = 0.0;
  bool converged = false;
  int newton_steps = 0;
};

SatoSolution solve_sato_barrier(const EffectiveChannel& chan, const SatoOptions& opts = {});

/// Residuals of the saddle-point KKT system checked on the mapped solution
/// (d* = phi/eta, Y* = (Z* + I)^{-1}/eta).
struct KktReport {
  double stationarity = 0.0;    // matrix stationarity in Y
  double per_user = 0.0;        // worst per-user condition residual
  double trace_error = 0.0;     // |tr(Y*) - 1|
  double complementary = 0.0;   // worst multiplier * d_k
  bool ok = false;
  std::string violated;         // name of the first failed condition, empty if ok
};

struct KktVerification {
  SaddlePoint saddle;
  KktReport report;
};

/// Maps a Sato solution to the saddle point and verifies the full KKT system
/// at 1e-6 tolerance; the returned rate is evaluated independently through
/// mac_mmse_sinr_and_rate.
KktVerification verify_kkt_theorem1(const SatoSolution& sato, const EffectiveChannel& chan);

/// Downlink effective precoder achieving the saddle-point rates, via the
/// K linear SINR equations at the uplink SINR targets.
CMat recover_sumrate_precoder(const SaddlePoint& sp, const EffectiveChannel& chan);

}  // namespace radcom
