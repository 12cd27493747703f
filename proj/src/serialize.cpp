#include "radcom/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace radcom {

using nlohmann::json;

json matrix_to_json(const CMat& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

CMat matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (rows < 0 || cols < 0 || entries.size() != static_cast<size_t>(rows * cols)) {
    throw std::invalid_argument("matrix_from_json: entry count does not match dimensions");
  }
  CMat m(rows, cols);
  size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index jj = 0; jj < cols; ++jj) {
      const auto& pair = entries.at(idx++);
      m(i, jj) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  }
  return m;
}

namespace {

json real_vector_to_json(const RVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RVec real_vector_from_json(const json& j) {
  RVec v(j.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

}  // namespace

json effective_channel_to_json(const EffectiveChannel& chan) {
  return {{"R_h", matrix_to_json(chan.R_h)},
          {"rank", chan.rank},
          {"U", matrix_to_json(chan.U)},
          {"eigenvalues", real_vector_to_json(chan.eigenvalues)},
          {"rows", matrix_to_json(chan.rows)},
          {"s", real_vector_to_json(chan.s)},
          {"noise_power", chan.noise_power}};
}

EffectiveChannel effective_channel_from_json(const json& j) {
  EffectiveChannel chan;
  chan.R_h = matrix_from_json(j.at("R_h"));
  chan.rank = j.at("rank").get<int>();
  chan.U = matrix_from_json(j.at("U"));
  chan.eigenvalues = real_vector_from_json(j.at("eigenvalues"));
  chan.rows = matrix_from_json(j.at("rows"));
  chan.s = real_vector_from_json(j.at("s"));
  chan.noise_power = j.at("noise_power").get<double>();
  return chan;
}

json precoders_to_json(const Precoders& prec) {
  return {{"W_c", matrix_to_json(prec.W_c)},
          {"W_r", matrix_to_json(prec.W_r)},
          {"F", matrix_to_json(prec.F)},
          {"G", matrix_to_json(prec.G)}};
}

Precoders precoders_from_json(const json& j) {
  Precoders prec;
  prec.W_c = matrix_from_json(j.at("W_c"));
  prec.W_r = matrix_from_json(j.at("W_r"));
  prec.F = matrix_from_json(j.at("F"));
  prec.G = matrix_from_json(j.at("G"));
  return prec;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_tbf_trace_csv(const BalancingResult& result, const std::string& path) {
  auto out = open_or_throw(path);
  out << "iteration,h,gamma,step,delta_norm\n";
  for (const auto& row : result.trace) {
    out << row.iteration << "," << row.objective << "," << row.gamma << "," << row.step << ","
        << row.delta_norm << "\n";
  }
}

void write_dpc_trace_csv(const BalancingResult& result, const std::string& path) {
  auto out = open_or_throw(path);
  out << "iteration,gamma,delta_norm,min_eig_Y\n";
  for (const auto& row : result.trace) {
    out << row.iteration << "," << row.gamma << "," << row.delta_norm << "," << row.min_eig_y
        << "\n";
  }
}

void write_saddle_trace_csv(const SaddlePoint& saddle, const std::string& path) {
  auto out = open_or_throw(path);
  out << "iteration,rate,residual_Y,residual_d\n";
  for (const auto& row : saddle.trace) {
    out << row.iteration << "," << row.rate_bits << "," << row.residual_y << ","
        << row.residual_d << "\n";
  }
}

}  // namespace radcom
