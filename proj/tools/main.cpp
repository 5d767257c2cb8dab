#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dmm/config.hpp"
#include "dmm/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string policies;
  std::uint64_t seed = 0;
  int trials = 0;
  bool seed_set = false;
  bool trials_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* config = cmd->add_option("--config", flags.config_path, "experiment config file (JSON)");
  if (config_required) config->required();
  cmd->add_option("--out", flags.out_dir, "output directory for CSV artifacts");
  cmd->add_option("--policies", flags.policies, "comma-separated policy list, e.g. m1-ns3,edf");
  cmd->add_option("--seed", flags.seed, "override the config seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--trials", flags.trials, "override the config trial count")
      ->each([&flags](const std::string&) { flags.trials_set = true; });
}

int run_mode(const std::string& mode, const CommonFlags& flags) {
  dmm::ExperimentSpec spec;
  if (!flags.config_path.empty()) {
    spec = dmm::load_config(flags.config_path);
  } else {
    spec.name = mode;
    spec.trials = 200;
  }
  spec.mode = mode;

  dmm::apply_env_overrides(spec);
  if (flags.seed_set) spec.seed_override = flags.seed;
  if (flags.trials_set) spec.trials_override = flags.trials;
  if (!flags.out_dir.empty()) spec.out_dir = flags.out_dir;
  if (!flags.policies.empty()) {
    spec.policies.clear();
    std::string rest = flags.policies;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string name = rest.substr(0, comma);
      rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
      const auto policy = dmm::parse_policy(name);
      if (!policy) {
        std::cerr << "unknown policy \"" << name
                  << "\" (known: m1, m1-ns3, m2, m2-ns3, edf, mh)\n";
        return 1;
      }
      spec.policies.push_back(*policy);
    }
  }
  return dmm::run_experiment(spec, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dmm: dynamic matching market simulator for flexible loads and renewables"};
  app.require_subcommand(1);

  CommonFlags simulate_flags, sweep_flags, table_flags, check_flags;
  auto* simulate = app.add_subcommand(
      "simulate", "run all policies and the oracle over sampled scenarios, one CSV row per trial");
  add_common(simulate, simulate_flags, true);
  auto* sweep = app.add_subcommand(
      "sweep", "competitive ratio across a grid of variance scales");
  add_common(sweep, sweep_flags, true);
  auto* table = app.add_subcommand(
      "table", "expected-welfare table across scenario presets");
  add_common(table, table_flags, true);
  auto* check = app.add_subcommand(
      "oracle-check", "cross-check the exact oracle against brute force on tiny instances");
  add_common(check, check_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_mode("simulate", simulate_flags);
    if (sweep->parsed()) return run_mode("sweep", sweep_flags);
    if (table->parsed()) return run_mode("table", table_flags);
    if (check->parsed()) return run_mode("oracle-check", check_flags);
  } catch (const dmm::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
