#include "dmm/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "dmm/oracle.hpp"

namespace dmm {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Summary-table rendering only; CSV artifacts keep full precision.
std::string fmt_cell(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return buf;
}

std::string fmt_hash(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

// Sample standard error of the mean, in dollars, over exact money values.
double mean_stderr_dollars(const std::vector<Money>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0;
  double mean = 0;
  for (Money v : values) mean += money_to_dollars(v);
  mean /= n;
  double ss = 0;
  for (Money v : values) {
    const double d = money_to_dollars(v) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (n - 1) / n);
}

}  // namespace

std::string simulate_csv(const TrialBatch& batch) {
  std::string out = "trial,policy,welfare,w_rs,w_gs,grid_payment,oracle_welfare,realization_hash\n";
  for (const TrialRow& row : batch.rows) {
    for (const auto& [policy, b] : row.policy_results) {
      out += std::to_string(row.trial);
      out += ',';
      out += policy_name(policy);
      out += ',';
      out += format_money(b.total);
      out += ',';
      out += format_money(b.w_rs);
      out += ',';
      out += format_money(b.w_gs);
      out += ',';
      out += format_money(b.grid_payment);
      out += ',';
      out += format_money(row.oracle_welfare);
      out += ',';
      out += fmt_hash(row.hash);
      out += '\n';
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "lambda,sigma,policy,cr,stderr\n";
  for (const SweepRow& row : sweep.rows) {
    out += fmt_double(row.lambda);
    out += ',';
    out += fmt_double(row.sigma_combined);
    out += ',';
    out += policy_name(row.policy);
    out += ',';
    out += fmt_double(row.cr);
    out += ',';
    out += fmt_double(row.stderr_cr);
    out += '\n';
  }
  return out;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::string out = "scenario,policy,mean_welfare,stderr\n";
  for (const TableRow& row : rows) {
    out += row.scenario;
    out += ',';
    out += row.policy;
    out += ',';
    out += fmt_double(money_to_dollars(row.total_welfare) / row.trials);
    out += ',';
    out += fmt_double(row.stderr_welfare);
    out += '\n';
  }
  return out;
}

namespace {

void write_manifest(const ExperimentSpec& spec, const fs::path& csv_path) {
  nlohmann::json meta;
  meta["name"] = spec.name;
  meta["mode"] = spec.mode;
  meta["seed"] = spec.scenario.seed;
  meta["trials"] = spec.trials;
  meta["lambda"] = spec.scenario.lambda;
  if (!spec.lambda_grid.empty()) meta["lambda_grid"] = spec.lambda_grid;
  meta["csv"] = csv_path.filename().string();
  write_file(csv_path.string() + ".meta.json", meta.dump(2) + "\n");
}

ExperimentSpec with_overrides(ExperimentSpec spec) {
  if (spec.seed_override) spec.scenario.seed = *spec.seed_override;
  if (spec.trials_override) spec.trials = *spec.trials_override;
  return spec;
}

int run_simulate(const ExperimentSpec& spec, std::ostream& log) {
  TrialBatch batch;
  const auto estimates = estimate_cr(spec.scenario, spec.policies, spec.trials, &batch);

  const fs::path csv_path = fs::path(spec.out_dir) / (spec.name + "_simulate.csv");
  write_file(csv_path, simulate_csv(batch));
  write_manifest(spec, csv_path);

  log << "simulate " << spec.name << ": " << spec.trials << " trials, seed "
      << spec.scenario.seed << "\n";
  log << "  policy      E[W] ($)        CR      stderr\n";
  for (const auto& est : estimates) {
    log << "  " << std::left << std::setw(8) << policy_name(est.policy) << std::right
        << std::setw(12) << fmt_cell(est.mean_w_alg_dollars(), 2) << std::setw(10)
        << fmt_cell(est.cr, 4) << std::setw(12) << fmt_cell(est.stderr_cr, 6) << "\n";
  }
  log << "  " << std::left << std::setw(8) << "oracle" << std::right << std::setw(12)
      << fmt_cell(estimates.front().mean_w_oracle_dollars(), 2) << "\n";
  log << "  wrote " << csv_path.string() << "\n";
  return 0;
}

int run_sweep(const ExperimentSpec& spec, std::ostream& log) {
  const SweepResult sweep = co_sweep(spec.scenario, spec.lambda_grid, spec.policies, spec.trials);

  const fs::path csv_path = fs::path(spec.out_dir) / (spec.name + "_sweep.csv");
  write_file(csv_path, sweep_csv(sweep));
  write_manifest(spec, csv_path);

  log << "sweep " << spec.name << ": " << spec.trials << " trials per point, seed "
      << spec.scenario.seed << "\n";
  log << "  lambda   sigma      policy      CR      stderr\n";
  for (const SweepRow& row : sweep.rows) {
    log << "  " << std::left << std::setw(8) << fmt_cell(row.lambda, 2) << std::setw(10)
        << fmt_cell(row.sigma_combined, 4) << std::setw(8) << policy_name(row.policy)
        << std::right << std::setw(10) << fmt_cell(row.cr, 4) << std::setw(12)
        << fmt_cell(row.stderr_cr, 6) << "\n";
  }
  log << "  wrote " << csv_path.string() << "\n";
  return 0;
}

int run_table(const ExperimentSpec& spec, std::ostream& log) {
  std::vector<TableRow> rows;
  for (const std::string& path : spec.scenario_paths) {
    ExperimentSpec sub = load_config(path);
    sub.seed_override = spec.seed_override;
    sub.trials_override = spec.trials_override;
    sub = with_overrides(sub);

    TrialBatch batch;
    const auto estimates = estimate_cr(sub.scenario, sub.policies, sub.trials, &batch);

    std::vector<Money> oracle_w;
    oracle_w.reserve(batch.rows.size());
    for (const TrialRow& row : batch.rows) oracle_w.push_back(row.oracle_welfare);

    for (std::size_t pi = 0; pi < estimates.size(); ++pi) {
      std::vector<Money> w;
      w.reserve(batch.rows.size());
      for (const TrialRow& row : batch.rows) w.push_back(row.policy_results[pi].second.total);
      rows.push_back({sub.name, policy_name(estimates[pi].policy), estimates[pi].total_w_alg,
                      estimates[pi].trials, mean_stderr_dollars(w)});
    }
    rows.push_back({sub.name, "oracle", estimates.front().total_w_oracle,
                    estimates.front().trials, mean_stderr_dollars(oracle_w)});
  }

  const fs::path csv_path = fs::path(spec.out_dir) / (spec.name + "_table.csv");
  write_file(csv_path, table_csv(rows));
  write_manifest(spec, csv_path);

  log << "table " << spec.name << ":\n";
  log << "  scenario      policy    E[W] ($)      stderr\n";
  for (const TableRow& row : rows) {
    log << "  " << std::left << std::setw(14) << row.scenario << std::setw(8) << row.policy
        << std::right << std::setw(12)
        << fmt_cell(money_to_dollars(row.total_welfare) / row.trials, 2) << std::setw(12)
        << fmt_cell(row.stderr_welfare, 3) << "\n";
  }
  log << "  wrote " << csv_path.string() << "\n";
  return 0;
}

}  // namespace

bool run_oracle_check(std::uint64_t seed, int instances, std::ostream& log) {
  int agree = 0;
  for (int i = 0; i < instances; ++i) {
    const Realization r = random_tiny_instance(seed, i);
    const Money exact = oracle_solve(r).total;
    const Money brute = brute_force_oracle(r).total;
    if (exact == brute) {
      ++agree;
    } else {
      log << "  disagreement at instance " << i << " (seed " << seed
          << "): solver " << format_money(exact) << " vs brute force " << format_money(brute)
          << "\n";
    }
  }
  log << "oracle-check: " << agree << "/" << instances << " agree\n";
  return agree == instances;
}

int run_experiment(const ExperimentSpec& raw, std::ostream& log) {
  try {
    const ExperimentSpec spec = with_overrides(raw);
    if (spec.mode == "simulate") return run_simulate(spec, log);
    if (spec.mode == "sweep") return run_sweep(spec, log);
    if (spec.mode == "table") return run_table(spec, log);
    if (spec.mode == "oracle-check") {
      return run_oracle_check(spec.scenario.seed, spec.trials, log) ? 0 : 2;
    }
    log << "unknown mode: " << spec.mode << "\n";
    return 1;
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    // Invariant violations carry the trial seed for replay.
    log << "invariant violation: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dmm
