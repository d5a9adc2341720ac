#pragma once

#include <optional>
#include <string_view>

#include "graphnls/mesh.hpp"
#include "graphnls/solve.hpp"
#include "graphnls/soliton.hpp"

namespace graphnls {

struct ResidualNorms {
  double l2 = 0.0;
  double max = 0.0;
};

/// Strong residual of u'' + |u|^(p-2) u - lambda u at interior edge nodes,
/// evaluated with the same element forms as the energy (the weak residual
/// divided by the lumped nodal mass). Vertex and Dirichlet nodes are skipped.
ResidualNorms el_residual_norms(const GraphFunction& u, double lambda, double p);
/// L2 flavor of el_residual_norms.
double el_residual(const GraphFunction& u, double lambda, double p);

/// Max over vertices of |sum of outgoing derivatives|, each derivative taken
/// with the second-order one-sided stencil (-3 u0 + 4 u1 - u2) / (2 h).
double kirchhoff_residual(const GraphFunction& u);
/// Same vertex sum with the outgoing derivative recovered from the weak form:
/// u'(0) = (u1 - u0) / h - int (lambda u - |u|^(p-2) u) phi_v on the first element.
/// Vanishes exactly at a discrete critical point.
double kirchhoff_residual(const GraphFunction& u, double lambda, double p);

/// max |u| on the nodes of e minus max |u| on the nodes of every other edge.
double localization_margin(const GraphFunction& u, std::size_t edge);
double localization_margin(const GraphFunction& u, std::string_view edge);

struct CertifyOptions {
  double residual_tol = 1e-4;
  /// Relative broadening of the energy sandwich.
  double energy_rel_tol = 1e-3;
  /// Absolute slack of the lower bound with measured preimage count.
  double ge3_tol = 1e-6;
};

struct VerificationReport {
  double el_residual = 0.0;
  double el_residual_max = 0.0;
  double kirchhoff_residual = 0.0;
  /// Stencil flavor of the vertex residual, reported for reference.
  double kirchhoff_stencil = 0.0;
  std::optional<double> localization_margin;
  bool residuals_pass = false;
  bool positivity = false;
  double min_relative_value = 0.0;
  bool lambda_positive = false;
  /// Checked only for reports claiming ground-state status.
  std::optional<bool> sandwich;
  double line_level = 0.0;
  double halfline_level = 0.0;
  bool ge3 = false;
  int measured_n = 0;
  double ge3_bound = 0.0;
  /// Flag only: ratio within the sharp halfline constant. Not part of passed().
  bool gn = false;
  double gn_ratio = 0.0;
  double gn_bound = 0.0;
  double linf_ratio = 0.0;

  bool passed() const noexcept;
};

/// Runs every check; failures are recorded, never thrown.
VerificationReport certify(const SolveReport& report, const SolitonModel& model, const CertifyOptions& options = {});

}  // namespace graphnls
