// Command-line harness: radar covariance patterns, single-instance solves,
// and Monte Carlo sweeps with CSV/JSON output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radcom/harness.hpp"
#include "radcom/serialize.hpp"

namespace {

using namespace radcom;
using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

struct InstanceArgs {
  int antennas = 10;
  int users = 4;
  std::string pattern = "omni";
  double snr_db = 10.0;
  std::uint64_t seed = 1;
  double noise_power = 1.0;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::string config_path;
  std::string trace_path;
  std::string out_path;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--antennas", args.antennas, "Transmit antenna count M");
  cmd->add_option("--users", args.users, "User count K");
  cmd->add_option("--pattern", args.pattern, "Radar pattern: omni, phased, multibeam");
  cmd->add_option("--snr-db", args.snr_db, "Transmit SNR P/sigma^2 in dB");
  cmd->add_option("--seed", args.seed, "Channel seed");
  cmd->add_option("--noise-power", args.noise_power, "Noise power sigma^2");
  cmd->add_option("--tol", args.tol, "Solver stopping tolerance");
  cmd->add_option("--max-iters", args.max_iters, "Solver iteration cap");
  cmd->add_option("--config", args.config_path,
                  "JSON instance file with H (matrix), optional S_o, power, noise_power");
  cmd->add_option("--trace", args.trace_path, "Write the convergence trace CSV here");
  cmd->add_option("--out", args.out_path, "Write the solve result JSON here");
}

struct Instance {
  EffectiveChannel ec;
  ChannelMatrix chan;
  RadarCovariance radar;
};

Instance build_instance(const InstanceArgs& args) {
  if (!args.config_path.empty()) {
    const json j = load_json(args.config_path);
    ChannelMatrix chan(matrix_from_json(j.at("H")));
    const double power = j.value("power", std::pow(10.0, args.snr_db / 10.0));
    CMat shape;
    if (j.contains("S_o")) {
      shape = matrix_from_json(j.at("S_o"));
    } else {
      shape = make_covariance(pattern_from_name(args.pattern), chan.antennas(), 1.0).shape;
    }
    const double noise = j.value("noise_power", args.noise_power);
    RadarCovariance radar(shape, power);
    EffectiveChannel ec = effective_channel(chan, radar, noise);
    return {std::move(ec), std::move(chan), std::move(radar)};
  }
  ChannelMatrix chan = rayleigh_channel(args.users, args.antennas, args.seed);
  const double power = args.noise_power * std::pow(10.0, args.snr_db / 10.0);
  RadarCovariance radar =
      make_covariance(pattern_from_name(args.pattern), args.antennas, power);
  EffectiveChannel ec = effective_channel(chan, radar, args.noise_power);
  return {std::move(ec), std::move(chan), std::move(radar)};
}

void write_result_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

json balancing_summary(const BalancingResult& res, const Instance& inst) {
  json j{{"gamma", res.gamma},
         {"gamma_db", 10.0 * std::log10(res.gamma)},
         {"t", res.t},
         {"iterations", res.iterations},
         {"converged", res.converged},
         {"F", matrix_to_json(res.F)}};
  const Precoders prec = recover_precoders(res.F, inst.chan, inst.radar);
  j["precoders"] = precoders_to_json(prec);
  return j;
}

int run_pattern(const std::string& pattern, int antennas, double power,
                const std::string& out_path, const std::string& beampattern_path) {
  const RadarCovariance radar = make_covariance(pattern_from_name(pattern), antennas, power);
  if (!out_path.empty()) {
    write_result_json(out_path, {{"pattern", pattern},
                                 {"power", power},
                                 {"S_o", matrix_to_json(radar.shape)},
                                 {"R_o", matrix_to_json(radar.covariance())}});
  }
  RVec angles(181);
  for (int i = 0; i < 181; ++i) angles(i) = -90.0 + i;
  const BeamGrid grid = beampattern(radar.covariance(), angles);
  if (!beampattern_path.empty()) {
    write_beampattern_csv(grid, beampattern_path);
  }
  std::cout << "pattern " << pattern << ": M = " << antennas << ", trace(R) = "
            << radar.covariance().trace().real() << ", peak " << grid.values.maxCoeff()
            << ", min " << grid.values.minCoeff() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Downlink multiuser precoding under a radar transmit-covariance constraint"};
  app.require_subcommand(1);

  // pattern
  auto* pattern_cmd = app.add_subcommand("pattern", "Emit a radar covariance and beampattern");
  std::string pattern_kind = "omni";
  int pattern_antennas = 10;
  double pattern_power = 1.0;
  std::string pattern_out, pattern_bp;
  pattern_cmd->add_option("--pattern", pattern_kind, "omni, phased, multibeam");
  pattern_cmd->add_option("--antennas", pattern_antennas, "Antenna count M");
  pattern_cmd->add_option("--power", pattern_power, "Transmit power P");
  pattern_cmd->add_option("--out", pattern_out, "Covariance JSON output path");
  pattern_cmd->add_option("--beampattern", pattern_bp, "Beampattern CSV output path");

  // single-instance solves
  InstanceArgs tbf_args, dpc_args, sum_args;
  auto* tbf_cmd = app.add_subcommand("tbf-balance", "SINR balancing, transmit beamforming");
  add_instance_options(tbf_cmd, tbf_args);
  auto* dpc_cmd = app.add_subcommand("dpc-balance", "SINR balancing, dirty-paper coding");
  add_instance_options(dpc_cmd, dpc_args);
  auto* sum_cmd = app.add_subcommand("dpc-sumrate", "Sum-rate maximization, dirty-paper coding");
  add_instance_options(sum_cmd, sum_args);
  bool check_sato = false;
  sum_cmd->add_flag("--check-sato", check_sato,
                    "Also solve the barrier program and verify the KKT system");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over SNR and trials");
  std::string sweep_config, sweep_out, sweep_format, sweep_methods;
  ExperimentConfig sweep_defaults;
  std::vector<double> sweep_snr;
  std::optional<int> sweep_antennas, sweep_users, sweep_trials, sweep_threads, sweep_max_iters;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<double> sweep_tol;
  std::string sweep_pattern;
  sweep_cmd->add_option("--config", sweep_config, "JSON config mirroring ExperimentConfig");
  sweep_cmd->add_option("--antennas", sweep_antennas, "Antenna count M");
  sweep_cmd->add_option("--users", sweep_users, "User count K");
  sweep_cmd->add_option("--pattern", sweep_pattern, "omni, phased, multibeam");
  sweep_cmd->add_option("--snr-db", sweep_snr, "SNR grid in dB")->delimiter(',');
  sweep_cmd->add_option("--trials", sweep_trials, "Monte Carlo trials per SNR point");
  sweep_cmd->add_option("--seed", sweep_seed, "Master seed");
  sweep_cmd->add_option("--methods", sweep_methods,
                        "Comma-separated subset of tbf_balance,dpc_balance,dpc_sumrate,zf_dpc");
  sweep_cmd->add_option("--out", sweep_out, "Results file path");
  sweep_cmd->add_option("--format", sweep_format, "csv or json");
  sweep_cmd->add_option("--tol", sweep_tol, "Solver tolerance applied to all methods");
  sweep_cmd->add_option("--max-iters", sweep_max_iters, "Iteration cap applied to all methods");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker thread count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pattern_cmd->parsed()) {
      return run_pattern(pattern_kind, pattern_antennas, pattern_power, pattern_out, pattern_bp);
    }

    if (tbf_cmd->parsed()) {
      const Instance inst = build_instance(tbf_args);
      TbfOptions opts;
      if (tbf_args.tol) opts.tol = *tbf_args.tol;
      if (tbf_args.max_iters) opts.max_iterations = *tbf_args.max_iters;
      const BalancingResult res = solve_tbf_balancing(inst.ec, opts);
      if (!tbf_args.trace_path.empty()) write_tbf_trace_csv(res, tbf_args.trace_path);
      if (!tbf_args.out_path.empty()) write_result_json(tbf_args.out_path, balancing_summary(res, inst));
      std::cout << "tbf_balance: gamma = " << res.gamma << " ("
                << 10.0 * std::log10(res.gamma) << " dB), iterations = " << res.iterations
                << (res.converged ? "" : " [not converged]") << "\n";
      return res.converged ? 0 : 2;
    }

    if (dpc_cmd->parsed()) {
      const Instance inst = build_instance(dpc_args);
      DpcBalancingOptions opts;
      if (dpc_args.tol) opts.outer_tol = *dpc_args.tol;
      if (dpc_args.max_iters) opts.outer_cap = *dpc_args.max_iters;
      const BalancingResult res = solve_dpc_balancing(inst.ec, opts);
      if (!dpc_args.trace_path.empty()) write_dpc_trace_csv(res, dpc_args.trace_path);
      if (!dpc_args.out_path.empty()) write_result_json(dpc_args.out_path, balancing_summary(res, inst));
      std::cout << "dpc_balance: gamma = " << res.gamma << " ("
                << 10.0 * std::log10(res.gamma) << " dB), iterations = " << res.iterations
                << (res.converged ? "" : " [not converged]") << "\n";
      return res.converged ? 0 : 2;
    }

    if (sum_cmd->parsed()) {
      const Instance inst = build_instance(sum_args);
      ExtragradientOptions opts;
      if (sum_args.tol) opts.tol = *sum_args.tol;
      if (sum_args.max_iters) opts.cap = *sum_args.max_iters;
      const SaddlePoint sp = solve_saddle_extragradient(inst.ec, opts);
      if (!sum_args.trace_path.empty()) write_saddle_trace_csv(sp, sum_args.trace_path);
      std::cout << "dpc_sumrate: rate = " << sp.rate_bits << " bits, iterations = "
                << sp.iterations << (sp.converged ? "" : " [not converged]") << "\n";
      json out{{"rate_bits", sp.rate_bits},
               {"iterations", sp.iterations},
               {"converged", sp.converged},
               {"Y", matrix_to_json(sp.Y)}};
      const CMat F = recover_sumrate_precoder(sp, inst.ec);
      out["F"] = matrix_to_json(F);
      out["precoders"] = precoders_to_json(recover_precoders(F, inst.chan, inst.radar));
      if (check_sato) {
        const SatoSolution sato = solve_sato_barrier(inst.ec);
        const KktVerification kkt = verify_kkt_theorem1(sato, inst.ec);
        std::cout << "sato bound = " << sato.bound_bits << " bits, gap = "
                  << std::abs(sato.bound_bits - sp.rate_bits) << " bits, KKT "
                  << (kkt.report.ok ? "ok" : ("violated: " + kkt.report.violated)) << "\n";
        out["sato_bound_bits"] = sato.bound_bits;
        out["kkt_ok"] = kkt.report.ok;
        if (!kkt.report.ok) {
          std::cerr << "KKT verification failed: " << kkt.report.violated << "\n";
          return 3;
        }
      }
      if (!sum_args.out_path.empty()) write_result_json(sum_args.out_path, out);
      return sp.converged ? 0 : 2;
    }

    if (sweep_cmd->parsed()) {
      ExperimentConfig cfg = sweep_defaults;
      if (!sweep_config.empty()) cfg = config_from_json(load_json(sweep_config));
      if (sweep_antennas) cfg.antennas = *sweep_antennas;
      if (sweep_users) cfg.users = *sweep_users;
      if (!sweep_pattern.empty()) cfg.pattern = pattern_from_name(sweep_pattern);
      if (!sweep_snr.empty()) cfg.snr_db_grid = sweep_snr;
      if (sweep_trials) cfg.trials = *sweep_trials;
      if (sweep_seed) cfg.seed = *sweep_seed;
      if (!sweep_methods.empty()) {
        cfg.methods.clear();
        std::istringstream ms(sweep_methods);
        std::string name;
        while (std::getline(ms, name, ',')) cfg.methods.push_back(method_from_name(name));
      }
      if (!sweep_out.empty()) cfg.out_path = sweep_out;
      if (!sweep_format.empty()) {
        if (sweep_format == "csv") {
          cfg.format = OutputFormat::Csv;
        } else if (sweep_format == "json") {
          cfg.format = OutputFormat::Json;
        } else {
          throw std::invalid_argument("unknown format: " + sweep_format);
        }
      }
      if (sweep_tol) {
        cfg.tbf.tol = *sweep_tol;
        cfg.dpc.outer_tol = *sweep_tol;
        cfg.sumrate.tol = *sweep_tol;
      }
      if (sweep_max_iters) {
        cfg.tbf.max_iterations = *sweep_max_iters;
        cfg.dpc.outer_cap = *sweep_max_iters;
        cfg.sumrate.cap = *sweep_max_iters;
      }
      if (sweep_threads) cfg.threads = *sweep_threads;

      const std::vector<TrialRecord> records = run_experiment(cfg);
      if (!cfg.out_path.empty()) {
        emit_results(records, cfg.out_path, cfg.format);
        std::cout << "wrote " << records.size() << " records to " << cfg.out_path << "\n";
      } else {
        std::cout << records_to_csv(records);
      }
      int failures = 0;
      for (const auto& r : records) {
        if (!r.converged) ++failures;
      }
      if (failures > 0) {
        std::cerr << failures << " of " << records.size() << " solves did not converge\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
