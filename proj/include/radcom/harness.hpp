#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "radcom/dpc_balancing.hpp"
#include "radcom/dpc_sumrate.hpp"
#include "radcom/model.hpp"
#include "radcom/radar_patterns.hpp"
#include "radcom/tbf_balancing.hpp"

namespace radcom {

enum class Method { TbfBalance, DpcBalance, DpcSumrate, ZfDpc };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  int antennas = 10;
  int users = 4;
  PatternKind pattern = PatternKind::Omni;
  MultibeamParams multibeam{};
  std::vector<double> snr_db_grid{0, 5, 10, 15, 20, 25, 30};
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::TbfBalance, Method::DpcBalance, Method::DpcSumrate};
  double noise_power = 1.0;
  TbfOptions tbf{};
  DpcBalancingOptions dpc{};
  ExtragradientOptions sumrate{};
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  int threads = 1;
};

/// One Monte Carlo outcome. `value` is the balanced SINR in dB for the
/// balancing methods and the sum rate in bits for dpc_sumrate / zf_dpc.
struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  int users = 0;
  int antennas = 0;
  std::string pattern;
  double snr_db = 0.0;
  std::string method;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double runtime_ms = 0.0;
};

bool records_equal(const TrialRecord& a, const TrialRecord& b, bool ignore_runtime = false);

/// Counter-based seed derivation so trial t is reproducible in isolation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// K x M matrix of i.i.d. circularly-symmetric complex normal entries with
/// unit variance, deterministic for a fixed seed.
ChannelMatrix rayleigh_channel(int users, int antennas, std::uint64_t seed);

void validate(const ExperimentConfig& cfg);

/// Runs the sweep: for each (snr, trial) the channel is drawn from the
/// per-trial seed, every requested method runs, and one record per method is
/// emitted. Failed solves are recorded with converged = false, never
/// dropped. Output order is (snr, trial, method) regardless of threading.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

std::string records_to_csv(const std::vector<TrialRecord>& records);
nlohmann::json records_to_json(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_csv(const std::string& text);
std::vector<TrialRecord> records_from_json(const nlohmann::json& j);

void emit_results(const std::vector<TrialRecord>& records, const std::string& path,
                  OutputFormat format);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace radcom
