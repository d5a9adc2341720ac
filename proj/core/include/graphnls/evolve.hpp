#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "graphnls/mesh.hpp"
#include "graphnls/solve.hpp"

namespace graphnls {

struct EvolveOptions {
  double final_time = 10.0;
  double dt = 1e-3;
  /// Observer calls and recorded samples every `stride` steps (and at the end).
  int stride = 100;
  double fixed_point_tol = 1e-10;
  int max_sweeps = 50;
  bool keep_snapshots = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> masses;
  std::vector<double> energies;
  std::vector<ComplexGraphFunction> snapshots;  // only with keep_snapshots
  ComplexGraphFunction final_state;
  double mass_drift = 0.0;    // max |mass(t) - mass(0)|
  double energy_drift = 0.0;  // max |E(t) - E(0)|
  int steps = 0;
};

using EvolveObserver = std::function<void(double, const ComplexGraphFunction&)>;

/// Crank-Nicolson integration of i u_t = -u'' - |u|^(p-2) u in the same
/// shared-DOF weak form as the energy:
///   (M + i dt/2 K) u+ = (M - i dt/2 K) u + i dt N((u + u+) / 2),
/// the midpoint nonlinearity resolved by fixed-point sweeps. The discrete
/// mass u* M u is conserved. Throws kNumerical on sweep failure or NaN.
Trajectory evolve(const ComplexGraphFunction& u0, double p, const EvolveOptions& options,
                  const EvolveObserver& observer = {});

/// min over theta of the H1 distance ||e^(i theta) u - v|| with
/// ||w||^2 = w* (K + M) w: a 256-point phase grid refined by golden section.
double orbital_distance(const ComplexGraphFunction& u, const ComplexGraphFunction& v);

struct StabilityOptions {
  double epsilon = 1e-2;
  double final_time = 10.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  int stride = 100;
};

struct StabilityReport {
  std::vector<double> times;
  /// Distance from the perturbed trajectory to the orbit of the bound state.
  std::vector<double> orbital_distances;
  double max_distance = 0.0;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  double relative_energy_drift = 0.0;
  double epsilon = 0.0;
};

/// Perturbs the bound state by epsilon times a seeded random complex function
/// of unit H1 norm, projects back to the reported mass and evolves.
StabilityReport stability_probe(const SolveReport& report, const StabilityOptions& options);

}  // namespace graphnls
