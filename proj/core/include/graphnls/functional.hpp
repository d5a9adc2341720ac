#pragma once

#include <optional>
#include <span>
#include <vector>

#include "graphnls/mesh.hpp"
#include "graphnls/soliton.hpp"

namespace graphnls {

/// E(u) = kinetic - potential with kinetic = 1/2 int |u'|^2 and
/// potential = 1/p int |u|^p.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double p = 0.0;
};

/// Throws kInvalidArgument unless 2 < p < 6.
void check_exponent(double p);

// Quadrature conventions: mass and kinetic terms are exact for P1 functions;
// int |u|^p uses Simpson's rule on every element with the midpoint value
// (a + b) / 2.

double mass(const GraphFunction& u);
double mass(const ComplexGraphFunction& u);
/// int |u'|^2
double gradient_norm_squared(const GraphFunction& u);
double gradient_norm_squared(const ComplexGraphFunction& u);
/// int |u|^p
double lp_integral(const GraphFunction& u, double p);
double lp_integral(const ComplexGraphFunction& u, double p);
double max_abs(const GraphFunction& u);

EnergyBreakdown energy(const GraphFunction& u, double p);
EnergyBreakdown energy(const ComplexGraphFunction& u, double p);

/// Load vector of the nonlinearity: entry i is int |u|^(p-2) u phi_i under the
/// element Simpson rule. Zero on Dirichlet DOFs.
Eigen::VectorXd nonlinear_load(const GraphFunction& u, double p);
Eigen::VectorXcd nonlinear_load(const ComplexGraphFunction& u, double p);

/// Dual vector g of the energy: g . eta = int u' eta' - int |u|^(p-2) u eta for
/// every discrete eta. Exactly the derivative of energy(u, p). Zero on
/// Dirichlet DOFs.
Eigen::VectorXd grad_energy(const GraphFunction& u, double p);

/// ||u||_p^p / (||u||_2^(p/2+1) ||u'||_2^(p/2-1)). Throws kInvalidArgument when
/// u or u' vanishes.
double gn_check(const GraphFunction& u, double p);
/// ||u||_inf^2 / (2 ||u||_2 ||u'||_2); at most 1 on a noncompact graph.
double linf_check(const GraphFunction& u);

/// Decreasing rearrangement of u >= 0 on the halfline. The distribution
/// function of a piecewise-linear u is computed exactly; the result is
/// sampled on a uniform halfline mesh whose length is the measure of
/// {u > 0}. Default spacing: a sixteenth of the finest input spacing.
/// Throws kInvalidArgument on negative values or the zero function.
GraphFunction rearrangement(const GraphFunction& u, std::optional<double> spacing = std::nullopt);

struct PreimageCounts {
  std::vector<int> counts;  // one per queried level
  /// Minimum count over almost every level in (0, max u): evaluated on every
  /// open band between consecutive nodal values, where the count is constant.
  int essential_min = 0;
};

/// Number of points where u = t. Transversal crossings inside elements are
/// counted once; nodes with u = t count once, except the interior nodes of a
/// plateau. Throws kInvalidArgument for negative u or levels outside (0, max u).
PreimageCounts preimage_count(const GraphFunction& u, std::span<const double> levels);
int essential_preimage_count(const GraphFunction& u);
/// n equispaced levels strictly inside (0, max u).
std::vector<double> level_grid(const GraphFunction& u, int n = 512);

/// Lower bound -theta (2/N)^(2 beta) nu^(2 beta + 1) for the energy of any
/// nonnegative function of mass nu whose levels have at least N preimages.
double ge3_bound(double nu, int preimages, const SolitonModel& model);

}  // namespace graphnls
