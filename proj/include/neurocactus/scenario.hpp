#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "neurocactus/control.hpp"
#include "neurocactus/dynamics.hpp"
#include "neurocactus/graph.hpp"

namespace neurocactus {

struct Expectation {
  // "boundedness" | "bound" | "convergence" | "rank" | "target"
  std::string check;
  double state_tol = 1e-3;          // convergence
  double weight_tol = 1e-2;         // convergence
  std::optional<double> tol;        // target: hard-fail threshold when present
};

struct TargetSpec {
  Eigen::VectorXd values;
  bool recompute_each_slot = true;
};

struct Scenario {
  std::string name;
  SignedGraph graph;
  NetworkParams params;
  std::vector<Channel> inputs;       // one per control node; empty with target set
  std::optional<TargetSpec> target;  // when set, the input is an LQR feedback law
  Eigen::VectorXd x0;
  double t_end = 0.0;
  std::vector<Expectation> expectations;
};

// Parses and fully validates a scenario file (schema 1). Graph references are
// resolved relative to the scenario file. Throws SchemaError with a JSON
// pointer to the offending field, or DanglingReference.
Scenario load_scenario(const std::filesystem::path& path);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string detail;
};

struct ScenarioRun {
  Trajectory trajectory;
  std::vector<CheckResult> checks;
  std::optional<RegulatorDesign> regulator;  // set for target scenarios
};

ScenarioRun run_scenario(const Scenario& s);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace neurocactus
