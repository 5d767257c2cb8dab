#include "dmm/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dmm {

namespace fs = std::filesystem;
using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&violations] {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

const std::vector<std::string> kModes = {"simulate", "sweep", "table", "oracle-check"};

class Parser {
 public:
  explicit Parser(const json& doc) : doc_(doc) {}

  std::vector<std::string> issues;

  bool has(const json& node, const char* key) const {
    return node.is_object() && node.contains(key);
  }

  double number_or(const json& node, const std::string& path, const char* key, double fallback) {
    if (!has(node, key)) return fallback;
    if (!node[key].is_number()) {
      issues.push_back(path + "." + key + ": must be a number");
      return fallback;
    }
    return node[key].get<double>();
  }

  int int_or(const json& node, const std::string& path, const char* key, int fallback) {
    if (!has(node, key)) return fallback;
    if (!node[key].is_number_integer()) {
      issues.push_back(path + "." + key + ": must be an integer");
      return fallback;
    }
    return node[key].get<int>();
  }

  std::uint64_t uint64_or(const json& node, const std::string& path, const char* key,
                          std::uint64_t fallback) {
    if (!has(node, key)) return fallback;
    if (!node[key].is_number_unsigned() && !node[key].is_number_integer()) {
      issues.push_back(path + "." + key + ": must be a non-negative integer");
      return fallback;
    }
    return node[key].get<std::uint64_t>();
  }

  std::string string_or(const json& node, const std::string& path, const char* key,
                        const std::string& fallback) {
    if (!has(node, key)) return fallback;
    if (!node[key].is_string()) {
      issues.push_back(path + "." + key + ": must be a string");
      return fallback;
    }
    return node[key].get<std::string>();
  }

  DiscretePmf pmf(const char* section) {
    DiscretePmf pmf;
    if (!has(doc_, section)) {
      issues.push_back(std::string(section) + ": section missing");
      return pmf;
    }
    const json& node = doc_[section];
    const std::string path = section;
    if (!has(node, "support") || !node["support"].is_array()) {
      issues.push_back(path + ".support: required integer array");
      return pmf;
    }
    for (const auto& v : node["support"]) {
      if (!v.is_number_integer()) {
        issues.push_back(path + ".support: entries must be integers");
        return pmf;
      }
      pmf.support.push_back(v.get<int>());
    }
    if (has(node, "probs")) {
      if (!node["probs"].is_array()) {
        issues.push_back(path + ".probs: must be an array of numbers");
        return pmf;
      }
      for (const auto& v : node["probs"]) {
        if (!v.is_number()) {
          issues.push_back(path + ".probs: entries must be numbers");
          return pmf;
        }
        pmf.probs.push_back(v.get<double>());
      }
    } else {
      pmf.probs.assign(pmf.support.size(), 1.0 / pmf.support.size());
    }
    for (const auto& issue : pmf.validate()) issues.push_back(path + "." + issue);
    return pmf;
  }

  const json& doc() const { return doc_; }

 private:
  const json& doc_;
};

}  // namespace

ExperimentSpec parse_config_text(const std::string& text, const std::string& config_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  if (!doc.is_object()) {
    throw ConfigError({"top level: must be a JSON object"});
  }

  Parser p(doc);
  ExperimentSpec spec;
  spec.config_dir = config_dir;

  const json& exp = p.has(doc, "experiment") ? doc["experiment"] : json::object();
  spec.name = p.string_or(exp, "experiment", "name", "experiment");
  spec.mode = p.string_or(exp, "experiment", "mode", "simulate");
  if (std::find(kModes.begin(), kModes.end(), spec.mode) == kModes.end()) {
    p.issues.push_back("experiment.mode: unknown mode \"" + spec.mode + "\"");
  }
  spec.trials = p.int_or(exp, "experiment", "trials", 100);
  if (spec.trials < 1) p.issues.push_back("experiment.trials: must be >= 1");
  spec.scenario.seed = p.uint64_or(exp, "experiment", "seed", 1);
  spec.scenario.lambda = p.number_or(exp, "experiment", "lambda", 1.0);
  if (!(spec.scenario.lambda >= 0.0 && spec.scenario.lambda <= 1.0)) {
    p.issues.push_back("experiment.lambda: must lie in [0, 1]");
  }
  spec.out_dir = p.string_or(exp, "experiment", "out", "out");

  if (p.has(exp, "policies")) {
    if (!exp["policies"].is_array()) {
      p.issues.push_back("experiment.policies: must be an array of policy names");
    } else {
      for (const auto& v : exp["policies"]) {
        if (!v.is_string()) {
          p.issues.push_back("experiment.policies: entries must be strings");
          continue;
        }
        const auto policy = parse_policy(v.get<std::string>());
        if (!policy) {
          p.issues.push_back("experiment.policies: unknown policy \"" + v.get<std::string>() +
                             "\" (known: m1, m1-ns3, m2, m2-ns3, edf, mh)");
        } else {
          spec.policies.push_back(*policy);
        }
      }
    }
  } else {
    spec.policies = {PolicyId::kM1NoStep3, PolicyId::kEdf, PolicyId::kMh};
  }

  if (p.has(exp, "lambda_grid")) {
    if (!exp["lambda_grid"].is_array()) {
      p.issues.push_back("experiment.lambda_grid: must be an array of numbers");
    } else {
      for (const auto& v : exp["lambda_grid"]) {
        if (!v.is_number()) {
          p.issues.push_back("experiment.lambda_grid: entries must be numbers");
          continue;
        }
        const double l = v.get<double>();
        if (!(l >= 0.0 && l <= 1.0)) {
          p.issues.push_back("experiment.lambda_grid: value " + std::to_string(l) +
                             " outside [0, 1]");
        }
        spec.lambda_grid.push_back(l);
      }
    }
  } else if (spec.mode == "sweep") {
    spec.lambda_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  }

  if (spec.mode == "table") {
    // Table mode references other scenario files by name; everything else
    // comes from those files.
    if (!p.has(exp, "scenarios") || !exp["scenarios"].is_array() || exp["scenarios"].empty()) {
      p.issues.push_back("experiment.scenarios: table mode needs a non-empty list of names");
    } else {
      for (const auto& v : exp["scenarios"]) {
        if (!v.is_string()) {
          p.issues.push_back("experiment.scenarios: entries must be strings");
          continue;
        }
        std::string name = v.get<std::string>();
        if (name.size() < 5 || name.substr(name.size() - 5) != ".json") name += ".json";
        const fs::path path = fs::path(config_dir) / name;
        if (!fs::exists(path)) {
          p.issues.push_back("experiment.scenarios: \"" + v.get<std::string>() +
                             "\" does not resolve (" + path.string() + " not found)");
        }
        spec.scenario_paths.push_back(path.string());
      }
    }
    if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
    return spec;
  }

  if (spec.mode == "oracle-check") {
    // Self-contained mode: only trials/seed matter.
    if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
    return spec;
  }

  const json& market = p.has(doc, "market") ? doc["market"] : json::object();
  if (!p.has(doc, "market")) p.issues.push_back("market: section missing");
  spec.scenario.params.grid_price =
      money_from_dollars(p.number_or(market, "market", "grid_price", 0.0));
  if (spec.scenario.params.grid_price <= 0) {
    p.issues.push_back("market.grid_price: must be > 0 (dollars per unit of energy)");
  }
  spec.scenario.params.horizon = p.int_or(market, "market", "horizon", 0);
  if (spec.scenario.params.horizon < 1) p.issues.push_back("market.horizon: must be >= 1");
  spec.scenario.params.unit_energy_mwh =
      p.number_or(market, "market", "unit_energy_mwh", 0.1);

  spec.scenario.n_pmf = p.pmf("arrivals");
  spec.scenario.s_pmf = p.pmf("supply");

  const json& loads = p.has(doc, "loads") ? doc["loads"] : json::object();
  if (!p.has(doc, "loads")) p.issues.push_back("loads: section missing");
  LoadAssignerSpec& assigner = spec.scenario.assigner;
  const std::string mode_name = p.string_or(loads, "loads", "assigner", "uniform_random");
  if (mode_name == "fixed_table") {
    assigner.mode = AssignMode::kFixedTable;
  } else if (mode_name == "uniform_random") {
    assigner.mode = AssignMode::kUniformRandom;
  } else if (mode_name == "later_higher_criticality") {
    assigner.mode = AssignMode::kLaterHigherCriticality;
  } else {
    p.issues.push_back("loads.assigner: unknown mode \"" + mode_name + "\"");
  }
  if (p.has(loads, "deadline_window") && loads["deadline_window"].is_array() &&
      loads["deadline_window"].size() == 2) {
    assigner.min_slack = loads["deadline_window"][0].get<int>();
    assigner.max_slack = loads["deadline_window"][1].get<int>();
  } else if (p.has(loads, "deadline_window")) {
    p.issues.push_back("loads.deadline_window: must be [min_slack, max_slack]");
  }
  if (p.has(loads, "criticality_range") && loads["criticality_range"].is_array() &&
      loads["criticality_range"].size() == 2) {
    assigner.min_criticality = money_from_dollars(loads["criticality_range"][0].get<double>());
    assigner.max_criticality = money_from_dollars(loads["criticality_range"][1].get<double>());
  } else if (p.has(loads, "criticality_range")) {
    p.issues.push_back("loads.criticality_range: must be [low, high] in dollars");
  }
  if (p.has(loads, "table")) {
    if (!loads["table"].is_array()) {
      p.issues.push_back("loads.table: must be an array of {slack, criticality}");
    } else {
      for (const auto& entry : loads["table"]) {
        TableEntry te;
        te.slack = entry.value("slack", 0);
        te.criticality = money_from_dollars(entry.value("criticality", 0.0));
        assigner.table.push_back(te);
      }
    }
  }
  for (const auto& issue : assigner.validate()) p.issues.push_back(issue);

  // Policy/scenario compatibility at the configured lambda.
  if (p.issues.empty()) {
    const MomentSummary m = scaled_moments(spec.scenario);
    for (PolicyId policy : spec.policies) {
      if (policy_needs_surplus_arrivals(policy) && m.mu_n < m.mu_s) {
        p.issues.push_back("experiment.policies: " + policy_name(policy) +
                           " requires mean arrivals >= mean supply, but mu_n=" +
                           std::to_string(m.mu_n) + " < mu_s=" + std::to_string(m.mu_s));
      }
    }
  }

  if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"file: cannot open \"" + path + "\""});
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ExperimentSpec spec = parse_config_text(buffer.str(), fs::path(path).parent_path().string());
  if (spec.name == "experiment") {
    spec.name = fs::path(path).stem().string();
  }
  return spec;
}

void apply_env_overrides(ExperimentSpec& spec) {
  if (const char* seed = std::getenv("DMM_SEED")) {
    spec.seed_override = std::strtoull(seed, nullptr, 10);
  }
  if (const char* trials = std::getenv("DMM_TRIALS")) {
    spec.trials_override = static_cast<int>(std::strtol(trials, nullptr, 10));
  }
}

}  // namespace dmm
