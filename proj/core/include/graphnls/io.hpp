#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "graphnls/evolve.hpp"
#include "graphnls/graph.hpp"
#include "graphnls/mesh.hpp"
#include "graphnls/solve.hpp"
#include "graphnls/verify.hpp"

namespace graphnls {

inline constexpr std::string_view kVersion = "1.0.0";

/// Mesh metadata (requested h, halfline truncation) and per-edge nodal arrays.
nlohmann::json to_json(const GraphFunction& u);
nlohmann::json to_json(const ComplexGraphFunction& u);
/// Rebuilds the mesh on `graph` from the stored metadata and reads the values.
GraphFunction graph_function_from_json(const nlohmann::json& doc, const MetricGraph& graph);

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const SolveConfig& cfg);
SolveConfig solve_config_from_json(const nlohmann::json& doc);

/// Every scalar field, the config echo, the graph and the minimizer.
nlohmann::json to_json(const SolveReport& report);
SolveReport solve_report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const ScanReport& scan, const MetricGraph& graph);
nlohmann::json to_json(const StabilityReport& report);
/// Times, masses, energies and the stored snapshots.
nlohmann::json to_json(const Trajectory& trajectory);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string version{kVersion};
  double wall_time = 0.0;
};

nlohmann::json to_json(const RunManifest& manifest);

/// Rows "edge,x,u" in edge order.
void write_csv(std::ostream& out, const GraphFunction& u);
/// Rows "mu,status,energy,lambda,localization_margin".
void write_csv(std::ostream& out, const ScanReport& scan);

}  // namespace graphnls
