#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmm/engine.hpp"
#include "dmm/scenario.hpp"

namespace dmm {

// Carries every problem found in a config document, with a path into the
// document per message.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct ExperimentSpec {
  std::string name;
  std::string mode = "simulate";  // simulate | sweep | table | oracle-check
  ScenarioConfig scenario;
  std::vector<PolicyId> policies;
  int trials = 100;
  std::vector<double> lambda_grid;          // sweep mode
  std::vector<std::string> scenario_paths;  // table mode, resolved to files
  std::string out_dir = "out";
  std::string config_dir;  // directory of the source file, for relative paths

  // Set by CLI flags or environment overrides; propagated into table-mode
  // sub-scenarios as well.
  std::optional<std::uint64_t> seed_override;
  std::optional<int> trials_override;
};

// Parses and validates a config document. Reports every violation at once
// (ConfigError), never just the first.
ExperimentSpec parse_config_text(const std::string& text, const std::string& config_dir);

// Reads the file and parses it. The file's directory becomes config_dir.
ExperimentSpec load_config(const std::string& path);

// Applies DMM_SEED / DMM_TRIALS if set. CLI flags take precedence and are
// applied by the caller afterwards.
void apply_env_overrides(ExperimentSpec& spec);

}  // namespace dmm
