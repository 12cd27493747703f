#include "radcom/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace radcom {

using nlohmann::json;

std::string method_name(Method method) {
  switch (method) {
    case Method::TbfBalance: return "tbf_balance";
    case Method::DpcBalance: return "dpc_balance";
    case Method::DpcSumrate: return "dpc_sumrate";
    case Method::ZfDpc: return "zf_dpc";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "tbf_balance") return Method::TbfBalance;
  if (name == "dpc_balance") return Method::DpcBalance;
  if (name == "dpc_sumrate") return Method::DpcSumrate;
  if (name == "zf_dpc") return Method::ZfDpc;
  throw std::invalid_argument("unknown method: " + name);
}

bool records_equal(const TrialRecord& a, const TrialRecord& b, bool ignore_runtime) {
  const auto value_eq = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.trial == b.trial && a.seed == b.seed && a.users == b.users &&
         a.antennas == b.antennas && a.pattern == b.pattern && a.snr_db == b.snr_db &&
         a.method == b.method && value_eq(a.value, b.value) && a.iterations == b.iterations &&
         a.converged == b.converged && (ignore_runtime || a.runtime_ms == b.runtime_ms);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over master + (index+1) * golden gamma
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ChannelMatrix rayleigh_channel(int users, int antennas, std::uint64_t seed) {
  if (users < 1 || antennas < users) {
    throw std::invalid_argument("rayleigh_channel: need 1 <= K <= M");
  }
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  };
  CMat H(users, antennas);
  for (int k = 0; k < users; ++k) {
    for (int m = 0; m < antennas; ++m) {
      // |h| = sqrt(-ln U) and uniform phase give CN(0,1).
      const double radius = std::sqrt(-std::log(1.0 - uniform()));
      const double phase = 2.0 * M_PI * uniform();
      H(k, m) = radius * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return ChannelMatrix(std::move(H));
}

void validate(const ExperimentConfig& cfg) {
  std::ostringstream problems;
  if (cfg.users < 1) problems << "users must be >= 1; ";
  if (cfg.users > cfg.antennas) problems << "users must not exceed antennas; ";
  if (cfg.trials < 1) problems << "trials must be >= 1; ";
  if (cfg.snr_db_grid.empty()) problems << "snr grid must be non-empty; ";
  for (double snr : cfg.snr_db_grid) {
    if (!std::isfinite(snr)) problems << "snr grid must be finite; ";
  }
  if (cfg.methods.empty()) problems << "methods must be non-empty; ";
  if (!(cfg.noise_power > 0.0)) problems << "noise power must be positive; ";
  if (cfg.threads < 1) problems << "threads must be >= 1; ";
  const std::string text = problems.str();
  if (!text.empty()) {
    throw std::invalid_argument("invalid experiment config: " + text);
  }
}

namespace {

TrialRecord run_method(Method method, const EffectiveChannel& ec, const ExperimentConfig& cfg) {
  TrialRecord rec;
  rec.method = method_name(method);
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (method) {
      case Method::TbfBalance: {
        const BalancingResult res = solve_tbf_balancing(ec, cfg.tbf);
        rec.value = 10.0 * std::log10(res.gamma);
        rec.iterations = res.iterations;
        rec.converged = res.converged;
        break;
      }
      case Method::DpcBalance: {
        const BalancingResult res = solve_dpc_balancing(ec, cfg.dpc);
        rec.value = 10.0 * std::log10(res.gamma);
        rec.iterations = res.iterations;
        rec.converged = res.converged;
        break;
      }
      case Method::DpcSumrate: {
        const SaddlePoint res = solve_saddle_extragradient(ec, cfg.sumrate);
        rec.value = res.rate_bits;
        rec.iterations = res.iterations;
        rec.converged = res.converged;
        break;
      }
      case Method::ZfDpc: {
        const CMat F = zf_dpc_precoder(ec);
        const RVec sinrs = compute_sinr(F, ec, SinrMode::Dpc);
        rec.value = (sinrs.array() + 1.0).log().sum() / std::log(2.0);
        rec.iterations = 0;
        rec.converged = true;
        break;
      }
    }
  } catch (const std::exception&) {
    rec.value = std::numeric_limits<double>::quiet_NaN();
    rec.iterations = 0;
    rec.converged = false;
  }
  const auto stop = std::chrono::steady_clock::now();
  rec.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return rec;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);

  const CMat shape = make_covariance(cfg.pattern, cfg.antennas, 1.0, cfg.multibeam).shape;
  const int num_methods = static_cast<int>(cfg.methods.size());
  const int num_snr = static_cast<int>(cfg.snr_db_grid.size());
  const int num_jobs = num_snr * cfg.trials;
  std::vector<TrialRecord> records(static_cast<size_t>(num_jobs) * num_methods);

  const auto run_job = [&](int job) {
    const int si = job / cfg.trials;
    const int ti = job % cfg.trials;
    const double snr_db = cfg.snr_db_grid[static_cast<size_t>(si)];
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(ti));
    const ChannelMatrix H = rayleigh_channel(cfg.users, cfg.antennas, seed);
    const double power = cfg.noise_power * std::pow(10.0, snr_db / 10.0);
    const RadarCovariance radar(shape, power);
    const EffectiveChannel ec = effective_channel(H, radar, cfg.noise_power);
    for (int mi = 0; mi < num_methods; ++mi) {
      TrialRecord rec = run_method(cfg.methods[static_cast<size_t>(mi)], ec, cfg);
      rec.trial = ti;
      rec.seed = seed;
      rec.users = cfg.users;
      rec.antennas = cfg.antennas;
      rec.pattern = pattern_name(cfg.pattern);
      rec.snr_db = snr_db;
      records[static_cast<size_t>(job) * num_methods + mi] = std::move(rec);
    }
  };

  if (cfg.threads <= 1) {
    for (int job = 0; job < num_jobs; ++job) run_job(job);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(cfg.threads, num_jobs);
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int job = next.fetch_add(1); job < num_jobs; job = next.fetch_add(1)) {
          run_job(job);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return records;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "trial,seed,K,M,pattern,snr_db,method,value,iterations,converged,runtime_ms\n";
  for (const auto& r : records) {
    out << r.trial << "," << r.seed << "," << r.users << "," << r.antennas << "," << r.pattern
        << "," << format_double(r.snr_db) << "," << r.method << "," << format_double(r.value)
        << "," << r.iterations << "," << (r.converged ? 1 : 0) << ","
        << format_double(r.runtime_ms) << "\n";
  }
  return out.str();
}

std::vector<TrialRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("records_from_csv: empty input");
  }
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 11) {
      throw std::invalid_argument("records_from_csv: expected 11 fields, got line: " + line);
    }
    TrialRecord r;
    r.trial = std::stoi(fields[0]);
    r.seed = std::stoull(fields[1]);
    r.users = std::stoi(fields[2]);
    r.antennas = std::stoi(fields[3]);
    r.pattern = fields[4];
    r.snr_db = parse_double(fields[5]);
    r.method = fields[6];
    r.value = parse_double(fields[7]);
    r.iterations = std::stoi(fields[8]);
    r.converged = fields[9] == "1" || fields[9] == "true";
    r.runtime_ms = parse_double(fields[10]);
    records.push_back(std::move(r));
  }
  return records;
}

json records_to_json(const std::vector<TrialRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    json item{{"trial", r.trial},       {"seed", r.seed},
              {"K", r.users},           {"M", r.antennas},
              {"pattern", r.pattern},   {"snr_db", r.snr_db},
              {"method", r.method},     {"iterations", r.iterations},
              {"converged", r.converged}, {"runtime_ms", r.runtime_ms}};
    if (std::isnan(r.value)) {
      item["value"] = nullptr;
    } else {
      item["value"] = r.value;
    }
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<TrialRecord> records_from_json(const json& j) {
  std::vector<TrialRecord> records;
  for (const auto& item : j) {
    TrialRecord r;
    r.trial = item.at("trial").get<int>();
    r.seed = item.at("seed").get<std::uint64_t>();
    r.users = item.at("K").get<int>();
    r.antennas = item.at("M").get<int>();
    r.pattern = item.at("pattern").get<std::string>();
    r.snr_db = item.at("snr_db").get<double>();
    r.method = item.at("method").get<std::string>();
    const auto& value = item.at("value");
    r.value = value.is_null() ? std::numeric_limits<double>::quiet_NaN() : value.get<double>();
    r.iterations = item.at("iterations").get<int>();
    r.converged = item.at("converged").get<bool>();
    r.runtime_ms = item.at("runtime_ms").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

void emit_results(const std::vector<TrialRecord>& records, const std::string& path,
                  OutputFormat format) {
  if (records.empty()) {
    throw std::invalid_argument("emit_results: no records to write");
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("emit_results: cannot open output file: " + path);
  }
  if (format == OutputFormat::Csv) {
    out << records_to_csv(records);
  } else {
    out << records_to_json(records).dump(2) << "\n";
  }
  if (!out) {
    throw std::runtime_error("emit_results: write failed for: " + path);
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  return {{"antennas", cfg.antennas},
          {"users", cfg.users},
          {"pattern",
           {{"kind", pattern_name(cfg.pattern)},
            {"centers_deg", cfg.multibeam.centers_deg},
            {"width_deg", cfg.multibeam.width_deg},
            {"grid_step_deg", cfg.multibeam.grid_step_deg}}},
          {"snr_db", cfg.snr_db_grid},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"methods", methods},
          {"noise_power", cfg.noise_power},
          {"solver",
           {{"tbf", {{"tol", cfg.tbf.tol}, {"max_iters", cfg.tbf.max_iterations}}},
            {"dpc",
             {{"tol", cfg.dpc.outer_tol},
              {"max_iters", cfg.dpc.outer_cap},
              {"inner_eps", cfg.dpc.inner_eps},
              {"inner_cap", cfg.dpc.inner_cap}}},
            {"sumrate",
             {{"tol", cfg.sumrate.tol},
              {"max_iters", cfg.sumrate.cap},
              {"step", cfg.sumrate.step}}}}},
          {"out", cfg.out_path},
          {"format", cfg.format == OutputFormat::Csv ? "csv" : "json"},
          {"threads", cfg.threads}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("antennas")) cfg.antennas = j.at("antennas").get<int>();
  if (j.contains("users")) cfg.users = j.at("users").get<int>();
  if (j.contains("pattern")) {
    const auto& p = j.at("pattern");
    if (p.is_string()) {
      cfg.pattern = pattern_from_name(p.get<std::string>());
    } else {
      cfg.pattern = pattern_from_name(p.at("kind").get<std::string>());
      if (p.contains("centers_deg")) {
        cfg.multibeam.centers_deg = p.at("centers_deg").get<std::vector<double>>();
      }
      if (p.contains("width_deg")) cfg.multibeam.width_deg = p.at("width_deg").get<double>();
      if (p.contains("grid_step_deg")) {
        cfg.multibeam.grid_step_deg = p.at("grid_step_deg").get<double>();
      }
    }
  }
  if (j.contains("snr_db")) cfg.snr_db_grid = j.at("snr_db").get<std::vector<double>>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : j.at("methods")) {
      cfg.methods.push_back(method_from_name(name.get<std::string>()));
    }
  }
  if (j.contains("noise_power")) cfg.noise_power = j.at("noise_power").get<double>();
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (s.contains("tbf")) {
      const auto& t = s.at("tbf");
      if (t.contains("tol")) cfg.tbf.tol = t.at("tol").get<double>();
      if (t.contains("max_iters")) cfg.tbf.max_iterations = t.at("max_iters").get<int>();
    }
    if (s.contains("dpc")) {
      const auto& d = s.at("dpc");
      if (d.contains("tol")) cfg.dpc.outer_tol = d.at("tol").get<double>();
      if (d.contains("max_iters")) cfg.dpc.outer_cap = d.at("max_iters").get<int>();
      if (d.contains("inner_eps")) cfg.dpc.inner_eps = d.at("inner_eps").get<double>();
      if (d.contains("inner_cap")) cfg.dpc.inner_cap = d.at("inner_cap").get<int>();
    }
    if (s.contains("sumrate")) {
      const auto& e = s.at("sumrate");
      if (e.contains("tol")) cfg.sumrate.tol = e.at("tol").get<double>();
      if (e.contains("max_iters")) cfg.sumrate.cap = e.at("max_iters").get<int>();
      if (e.contains("step")) cfg.sumrate.step = e.at("step").get<double>();
    }
  }
  if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
  if (j.contains("format")) {
    const std::string f = j.at("format").get<std::string>();
    if (f == "csv") {
      cfg.format = OutputFormat::Csv;
    } else if (f == "json") {
      cfg.format = OutputFormat::Json;
    } else {
      throw std::invalid_argument("config: unknown format " + f);
    }
  }
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  return cfg;
}

}  // namespace radcom
