#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "neurocactus/control.hpp"
#include "neurocactus/dynamics.hpp"
#include "neurocactus/graph.hpp"
#include "neurocactus/scenario.hpp"

namespace neurocactus {

// Graph file: {"n", "edges":[{"i","j","sign","w0"}], "control":[{"node","gain"}],
// "bounds":{...}}. Keys are emitted in canonical (sorted) order so emitted
// documents round-trip byte-stably.
nlohmann::json graph_to_json(const SignedGraph& g);
SignedGraph graph_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const GeneralizedDecomposition& gd);
GeneralizedDecomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ControllabilityReport& r);
nlohmann::json lqr_to_json(const RegulatorDesign& d);
nlohmann::json monitor_to_json(const MonitorReport& m);
nlohmann::json checks_to_json(const std::vector<CheckResult>& checks);

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

// One row per dt sample, header t,x_1,...,x_N, 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
// One row per tau snapshot, header t,w_i_j,... in canonical i<j edge order.
void write_weights_csv(const std::filesystem::path& path, const Trajectory& traj,
                       const SignedGraph& g);

// Deterministic shortest-round-trip double formatting used by the CSV writers.
std::string format_double(double v);

}  // namespace neurocactus
