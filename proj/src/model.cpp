#include "radcom/model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace radcom {

ChannelMatrix::ChannelMatrix(CMat h) : H(std::move(h)) {
  if (H.rows() == 0 || H.cols() == 0) {
    throw std::invalid_argument("ChannelMatrix: empty matrix");
  }
  if (H.rows() > H.cols()) {
    throw std::invalid_argument("ChannelMatrix: more users than antennas (K > M)");
  }
  if (!H.allFinite()) {
    throw std::invalid_argument("ChannelMatrix: non-finite entries");
  }
}

RadarCovariance::RadarCovariance(CMat s, double p) : shape(std::move(s)), power(p) {
  if (shape.rows() != shape.cols() || shape.rows() == 0) {
    throw std::invalid_argument("RadarCovariance: shape must be square");
  }
  if (!(power > 0.0)) {
    throw std::invalid_argument("RadarCovariance: power must be positive");
  }
  if (!is_hermitian(shape, 1e-10)) {
    throw std::invalid_argument("RadarCovariance: shape is not Hermitian");
  }
  if (std::abs(shape.trace().real() - 1.0) > 1e-10) {
    throw std::invalid_argument("RadarCovariance: shape trace must be 1");
  }
  if (min_eigenvalue(shape) < -1e-12) {
    throw std::invalid_argument("RadarCovariance: shape is not PSD");
  }
  shape = hermitized(shape);
}

EffectiveChannel effective_channel(const ChannelMatrix& chan, const RadarCovariance& radar,
                                   double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("effective_channel: sigma2 must be positive");
  }
  if (chan.antennas() != radar.antennas()) {
    throw std::invalid_argument("effective_channel: channel/covariance dimension mismatch");
  }
  const CMat R = radar.covariance();
  const CMat R_h = hermitized(chan.H * R * chan.H.adjoint());

  const HermitianEig eig = eig_hermitian(R_h);
  const double lmax = eig.values(0);
  if (!(lmax > 0.0)) {
    throw std::invalid_argument("effective_channel: R_h is zero, no communication possible");
  }
  // Scale-invariant numerical rank.
  const double threshold = 1e-10 * lmax;
  int r = 0;
  while (r < eig.values.size() && eig.values(r) > threshold) ++r;

  EffectiveChannel out;
  out.R_h = R_h;
  out.rank = r;
  out.U = eig.vectors.leftCols(r);
  out.eigenvalues = eig.values.head(r);
  out.rows = out.U * out.eigenvalues.cwiseSqrt().asDiagonal();
  out.noise_power = sigma2;
  out.s = RVec(chan.users());
  for (int k = 0; k < chan.users(); ++k) {
    out.s(k) = std::sqrt(R_h(k, k).real() + sigma2);
  }
  return out;
}

RVec compute_sinr(const CMat& F, const EffectiveChannel& chan, SinrMode mode) {
  const int K = chan.users();
  if (F.rows() != K || F.cols() != K) {
    throw std::invalid_argument("compute_sinr: F must be K x K");
  }
  RVec sinr(K);
  if (mode == SinrMode::Tbf) {
    for (int k = 0; k < K; ++k) {
      const double num = std::norm(F(k, k));
      const double s2 = chan.s(k) * chan.s(k);
      if (num >= s2) {
        throw std::invalid_argument("compute_sinr: |F_kk|^2 >= s_k^2, infeasible F");
      }
      sinr(k) = num / (s2 - num);
    }
  } else {
    for (int k = 0; k < K; ++k) {
      double interference = 0.0;
      for (int i = k + 1; i < K; ++i) interference += std::norm(F(k, i));
      sinr(k) = std::norm(F(k, k)) / (interference + chan.noise_power);
    }
  }
  return sinr;
}

Precoders recover_precoders(const CMat& F, const ChannelMatrix& chan,
                            const RadarCovariance& radar) {
  const int K = chan.users();
  if (F.rows() != K || F.cols() != K) {
    throw std::invalid_argument("recover_precoders: F must be K x K");
  }
  const CMat R = radar.covariance();
  const CMat R_half = sqrt_psd(R);
  const CMat HR = chan.H * R_half;  // K x M

  // Moore-Penrose inverse of H R^{1/2} via SVD.
  Eigen::JacobiSVD<CMat> svd(HR, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cutoff = 1e-12 * svd.singularValues().maxCoeff();
  RVec inv = RVec::Zero(svd.singularValues().size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (svd.singularValues()(i) > cutoff) inv(i) = 1.0 / svd.singularValues()(i);
  }
  const CMat pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();  // M x K

  Precoders out;
  out.W_c = R_half * pinv * F;
  const CMat residual = hermitized(R - out.W_c * out.W_c.adjoint());
  const double lmin = min_eigenvalue(residual);
  if (lmin < -1e-8 * R.trace().real()) {
    std::ostringstream msg;
    msg << "recover_precoders: residual R - W_c W_c^H indefinite (min eigenvalue " << lmin
        << "), F violates F F^H <= R_h";
    throw std::invalid_argument(msg.str());
  }
  out.W_r = sqrt_psd(residual);
  out.F = chan.H * out.W_c;
  out.G = chan.H * out.W_r;
  return out;
}

CMat zf_dpc_precoder(const EffectiveChannel& chan) {
  const int K = chan.users();
  if (chan.rank < K) {
    std::ostringstream msg;
    msg << "zf_dpc_precoder: R_h is singular (rank " << chan.rank << " < K = " << K << ")";
    throw std::invalid_argument(msg.str());
  }
  Eigen::LLT<CMat> llt(chan.R_h);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("zf_dpc_precoder: Cholesky factorization failed");
  }
  return llt.matrixL();
}

WaveformBlock synthesize_waveforms(const Precoders& prec, int num_samples, std::uint64_t seed) {
  const int M = static_cast<int>(prec.W_r.rows());
  const int K = static_cast<int>(prec.W_c.cols());
  const int N = num_samples;
  if (N < M) {
    throw std::invalid_argument("synthesize_waveforms: need N >= M for an orthogonal basis");
  }

  WaveformBlock out;
  out.radar_waveforms = CMat(M, N);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      const double phase = 2.0 * M_PI * static_cast<double>(m) * static_cast<double>(n) / N;
      out.radar_waveforms(m, n) = Complex(std::cos(phase), std::sin(phase));
    }
  }

  // Unit-power zero-mean QPSK, independent across users and samples.
  std::mt19937_64 rng(seed);
  const double amp = 1.0 / std::sqrt(2.0);
  out.symbols = CMat(K, N);
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < K; ++k) {
      const std::uint64_t bits = rng();
      out.symbols(k, n) = Complex((bits & 1) ? amp : -amp, (bits & 2) ? amp : -amp);
    }
  }

  out.transmit = prec.W_r * out.radar_waveforms + prec.W_c * out.symbols;
  out.empirical_covariance =
      hermitized(out.transmit * out.transmit.adjoint() / static_cast<double>(N));
  return out;
}

}  // namespace radcom
