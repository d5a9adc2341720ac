#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphnls/functional.hpp"
#include "graphnls/graph.hpp"
#include "graphnls/mesh.hpp"
#include "graphnls/soliton.hpp"

namespace graphnls {

enum class StepRule { kFixed, kAdaptiveTwoPoint };
enum class SolveStatus { kInterior, kConstraintActive, kEscaped, kNotConverged };

std::string_view to_string(StepRule rule);
std::string_view to_string(SolveStatus status);
StepRule parse_step_rule(std::string_view text);
SolveStatus parse_status(std::string_view text);

struct SolveConfig {
  /// Stop when the tangential gradient norm drops below tolerance * max(1, mu).
  double tolerance = 1e-8;
  int max_iterations = 20000;
  StepRule step_rule = StepRule::kAdaptiveTwoPoint;
  double fixed_step = 0.5;
  double h = 0.01;
  /// Halfline truncation; empty selects the soliton-based automatic length.
  std::optional<double> truncation;
  std::uint64_t seed = 0;
  /// Competitor quality for the initial state.
  double epsilon = 0.05;
  /// Restarts from taller, narrower competitors after the maximum leaves the edge.
  int max_restarts = 3;
  /// Extra random smooth starts tried by ground_state.
  int random_starts = 2;
  /// Worker threads for catalogue and scan.
  int jobs = 1;

  void validate() const;
};

struct SolveReport {
  GraphFunction minimizer;
  EnergyBreakdown energy;
  double lambda = 0.0;
  double mass = 0.0;
  double requested_mass = 0.0;
  double p = 0.0;
  /// Mass on the far halves of the truncated halflines.
  double mass_loss = 0.0;
  bool migration = false;
  double localization_margin = 0.0;
  double el_residual = 0.0;
  double kirchhoff_residual = 0.0;
  /// Tangential gradient norm at the last iterate.
  double gradient_norm = 0.0;
  SolveStatus status = SolveStatus::kNotConverged;
  bool converged = false;
  int iterations = 0;
  int restarts = 0;
  /// Localization edge for constrained solves.
  std::optional<std::size_t> edge;
  bool ground_state = false;
  bool competitor_fit = true;
  ArgMax peak;
  SolveConfig config;
  std::vector<std::string> diagnostics;
};

/// sqrt(mu / mass(u)) u. Throws kInvalidArgument on the zero function.
GraphFunction project_mass(const GraphFunction& u, double mu);
ComplexGraphFunction project_mass(const ComplexGraphFunction& u, double mu);

/// (||u||_p^p - ||u'||^2) / mass(u): the multiplier obtained by testing the
/// weak equation with u itself.
double lagrange_multiplier(const GraphFunction& u, double p);

/// Smooth nonnegative random function: solves (K + M / corr^2) v = M xi with
/// xi uniform in [0, 1] at every free DOF.
GraphFunction random_smooth_function(std::shared_ptr<const Mesh> mesh, std::uint64_t seed,
                                     double correlation = 0.5);

/// Mesh used by the solvers for this graph, mass and exponent.
std::shared_ptr<const Mesh> solver_mesh(const MetricGraph& graph, double mu, double p, const SolveConfig& cfg);

struct DescentResult {
  GraphFunction u;
  double lambda = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set when the monitor stopped the run.
  bool interrupted = false;
};

/// Observer called after every accepted step; returning false stops the run.
using DescentMonitor = std::function<bool(const GraphFunction&, int)>;

/// Preconditioned projected-gradient descent of the energy on the discrete
/// mass sphere, retracted by project_mass. Absolute values are taken once
/// after the first phase.
DescentResult descend(const GraphFunction& start, double mu, double p, const SolveConfig& cfg,
                      const DescentMonitor& monitor = {});

/// Minimizer of the energy at mass mu with the maximum localized on edge e.
SolveReport minimize_on_edge(const MetricGraph& graph, std::string_view edge, double mu, double p,
                             const SolveConfig& cfg);

/// One report per bounded edge, in edge order.
std::vector<SolveReport> bound_state_catalogue(const MetricGraph& graph, double mu, double p, const SolveConfig& cfg);

struct ScanReport {
  std::vector<double> masses;
  std::vector<SolveReport> reports;
  /// Smallest grid mass with an interior status and positive margin.
  std::optional<double> threshold;
  /// Smallest grid mass at which a competitor fits on the edge.
  std::optional<double> fitting_threshold;
  /// Interior statuses that did not persist after two consecutive interior points.
  std::vector<double> monotonicity_violations;
};

ScanReport scan_mass_threshold(const MetricGraph& graph, std::string_view edge, double p,
                               std::span<const double> grid, const SolveConfig& cfg);

/// Best of the descents started from every bounded-edge competitor, the
/// vertex profiles, halfline solitons and random smooth starts.
SolveReport ground_state(const MetricGraph& graph, double mu, double p, const SolveConfig& cfg);

}  // namespace graphnls
