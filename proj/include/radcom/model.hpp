#pragma once

#include <cstdint>

#include "radcom/linalg.hpp"

namespace radcom {

/// Flat-fading downlink channel, one row per user. K <= M.
struct ChannelMatrix {
  CMat H;  // K x M

  explicit ChannelMatrix(CMat h);
  int users() const { return static_cast<int>(H.rows()); }
  int antennas() const { return static_cast<int>(H.cols()); }
};

/// Transmit covariance the radar requires: R = P * S with S Hermitian PSD,
/// unit trace. S carries the beampattern shape, P the total power relative
/// to unit noise.
struct RadarCovariance {
  CMat shape;    // S, M x M, trace 1
  double power;  // P

  RadarCovariance(CMat s, double p);
  int antennas() const { return static_cast<int>(shape.rows()); }
  CMat covariance() const { return power * shape; }  // R = P * S
};

/// The Gram matrix R_h = H R H^H together with its rank-r eigen factorization.
/// Shared input to every solver: row k of `rows` is u_k^H (the k-th row of
/// U Sigma^{1/2}), and s_k = sqrt([R_h]_kk + sigma^2) is the total received
/// power at user k under the covariance constraint.
struct EffectiveChannel {
  CMat R_h;         // K x K Hermitian PSD
  int rank = 0;     // r
  CMat U;           // K x r, orthonormal columns
  RVec eigenvalues; // r positive values, descending
  CMat rows;        // K x r = U * diag(sqrt(eigenvalues))
  RVec s;           // length K
  double noise_power = 1.0;  // sigma^2

  int users() const { return static_cast<int>(R_h.rows()); }
  /// u_k as a column vector (adjoint of row k of `rows`).
  CVec u(int k) const { return rows.row(k).adjoint(); }
  /// Rows scaled to unit noise, used by the DPC/MAC dual machinery.
  CMat noise_normalized_rows() const { return rows / std::sqrt(noise_power); }
};

enum class SinrMode { Tbf, Dpc };

/// Builds the effective channel. Rank is decided by the scale-invariant
/// threshold 1e-10 * lambda_max. Rejects non-Hermitian covariance input and
/// an all-zero R_h (no communication possible).
EffectiveChannel effective_channel(const ChannelMatrix& chan, const RadarCovariance& radar,
                                   double sigma2 = 1.0);

/// Per-user SINRs of an effective precoder F (K x K).
/// Tbf:  |F_kk|^2 / (s_k^2 - |F_kk|^2), using the fixed total received power
///       implied by the covariance constraint. Rejects |F_kk|^2 >= s_k^2.
/// Dpc:  |F_kk|^2 / (sum_{i>k} |F_ki|^2 + sigma^2).
RVec compute_sinr(const CMat& F, const EffectiveChannel& chan, SinrMode mode);

/// Physical precoder pair. Invariant: W_r W_r^H + W_c W_c^H = R within
/// 1e-8 relative Frobenius error.
struct Precoders {
  CMat W_c;  // M x K
  CMat W_r;  // M x M
  CMat F;    // K x K, = H W_c
  CMat G;    // K x M, = H W_r
};

/// Lifts an effective precoder back to transmit precoders:
///   W_c = R^{1/2} (H R^{1/2})^dagger F,  W_r = (R - W_c W_c^H)^{1/2}.
/// Rejects when the radar residual R - W_c W_c^H dips below -1e-8 tr(R).
Precoders recover_precoders(const CMat& F, const ChannelMatrix& chan, const RadarCovariance& radar);

/// Zero-forcing DPC precoder: lower-triangular Cholesky factor of R_h.
/// Requires full rank (r = K); rejects singular R_h with a rank diagnostic.
CMat zf_dpc_precoder(const EffectiveChannel& chan);

/// One block of synthesized transmit samples.
struct WaveformBlock {
  CMat radar_waveforms;        // M x N, orthogonal complex-exponential rows
  CMat symbols;                // K x N, unit-power QPSK
  CMat transmit;               // M x N, x(n) = W_r s(n) + W_c c(n)
  CMat empirical_covariance;   // (1/N) sum_n x(n) x(n)^H
};

/// Synthesizes N samples. The radar rows are exp(j 2 pi m n / N), so
/// (1/N) S S^H = I exactly and the only covariance error left is the
/// communication-symbol randomness. Requires N >= M.
WaveformBlock synthesize_waveforms(const Precoders& prec, int num_samples, std::uint64_t seed);

}  // namespace radcom
