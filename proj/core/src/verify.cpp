#include "graphnls/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphnls/error.hpp"
#include "graphnls/functional.hpp"

namespace graphnls {

namespace {

// g + lambda M u: the weak residual of the stationary equation.
Eigen::VectorXd weak_residual(const GraphFunction& u, double lambda, double p) {
  Eigen::VectorXd mu = mass_matrix(u.mesh()) * u.values();
  Eigen::VectorXd r = grad_energy(u, p) + lambda * mu;
  zero_dirichlet(u.mesh(), r);
  return r;
}

}  // namespace

ResidualNorms el_residual_norms(const GraphFunction& u, double lambda, double p) {
  const Mesh& mesh = u.mesh();
  const Eigen::VectorXd r = weak_residual(u, lambda, p);
  const Eigen::VectorXd lumped = lumped_mass(mesh);
  ResidualNorms out;
  double sum = 0.0;
  for (Index i = 0; i < mesh.dofs(); ++i) {
    if (mesh.dirichlet(i) || mesh.dof_vertex(i)) continue;
    const double rho = r[i] / lumped[i];
    sum += lumped[i] * rho * rho;
    out.max = std::max(out.max, std::abs(rho));
  }
  out.l2 = std::sqrt(sum);
  return out;
}

double el_residual(const GraphFunction& u, double lambda, double p) { return el_residual_norms(u, lambda, p).l2; }

double kirchhoff_residual(const GraphFunction& u) {
  const Mesh& mesh = u.mesh();
  const auto& v = u.values();
  std::vector<double> sums(mesh.graph().vertices().size(), 0.0);
  auto outgoing = [&](const EdgeMesh& em, bool from_start) {
    const std::size_t n = em.nodes();
    auto at = [&](std::size_t k) { return v[em.dofs[from_start ? k : n - 1 - k]]; };
    if (n >= 3) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * em.spacing);
    return (at(1) - at(0)) / em.spacing;
  };
  for (const EdgeMesh& em : mesh.edges()) {
    const MetricGraph& g = mesh.graph();
    sums[g.from_vertex(em.edge)] += outgoing(em, true);
    if (!em.halfline) sums[g.to_vertex(em.edge)] += outgoing(em, false);
  }
  double out = 0.0;
  for (double s : sums) out = std::max(out, std::abs(s));
  return out;
}

double kirchhoff_residual(const GraphFunction& u, double lambda, double p) {
  const Mesh& mesh = u.mesh();
  const Eigen::VectorXd r = weak_residual(u, lambda, p);
  double out = 0.0;
  for (std::size_t vtx = 0; vtx < mesh.graph().vertices().size(); ++vtx) {
    out = std::max(out, std::abs(r[mesh.vertex_dof(vtx)]));
  }
  return out;
}

double localization_margin(const GraphFunction& u, std::size_t edge) {
  const Mesh& mesh = u.mesh();
  if (edge >= mesh.edges().size()) throw Error(ErrorKind::kInvalidArgument, "unknown edge index");
  double on = 0.0;
  double off = 0.0;
  for (const EdgeMesh& em : mesh.edges()) {
    double top = 0.0;
    for (Index dof : em.dofs) top = std::max(top, std::abs(u.values()[dof]));
    if (em.edge == edge) {
      on = top;
    } else {
      off = std::max(off, top);
    }
  }
  return on - off;
}

double localization_margin(const GraphFunction& u, std::string_view edge) {
  return localization_margin(u, u.mesh().graph().edge_index(edge));
}

bool VerificationReport::passed() const noexcept {
  return residuals_pass && positivity && lambda_positive && sandwich.value_or(true) && ge3 &&
         linf_ratio <= 1.0 + 1e-6;
}

VerificationReport certify(const SolveReport& report, const SolitonModel& model, const CertifyOptions& options) {
  VerificationReport out;
  const GraphFunction& u = report.minimizer;
  const Mesh& mesh = u.mesh();
  const double p = report.p;

  const ResidualNorms el = el_residual_norms(u, report.lambda, p);
  out.el_residual = el.l2;
  out.el_residual_max = el.max;
  out.kirchhoff_residual = kirchhoff_residual(u, report.lambda, p);
  out.kirchhoff_stencil = kirchhoff_residual(u);
  out.residuals_pass = out.el_residual < options.residual_tol && out.kirchhoff_residual < options.residual_tol;
  if (report.edge) out.localization_margin = localization_margin(u, *report.edge);

  const double peak = u.values().cwiseAbs().maxCoeff();
  double lowest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < mesh.dofs(); ++i) {
    if (!mesh.dirichlet(i)) lowest = std::min(lowest, u.values()[i]);
  }
  out.positivity = lowest > 0.0;
  out.min_relative_value = peak > 0.0 ? lowest / peak : 0.0;
  out.lambda_positive = report.lambda > 0.0;

  const double m = mass(u);
  const EnergyBreakdown e = energy(u, p);
  const EnergyLevels levels = energy_levels(model, m);
  out.line_level = levels.line;
  out.halfline_level = levels.halfline;
  if (report.ground_state) out.sandwich = levels.in_sandwich(e.total, options.energy_rel_tol);

  const GraphFunction magnitude(u.mesh_ptr(), u.values().cwiseAbs());
  try {
    out.measured_n = essential_preimage_count(magnitude);
    out.ge3_bound = ge3_bound(m, out.measured_n, model);
    out.ge3 = e.total >= out.ge3_bound - options.ge3_tol;
  } catch (const Error&) {
    out.ge3 = false;
  }
  try {
    out.gn_ratio = gn_check(u, p);
    out.gn_bound = gn_constants(model).halfline;
    out.gn = out.gn_ratio <= out.gn_bound * (1.0 + 1e-6);
    out.linf_ratio = linf_check(u);
  } catch (const Error&) {
    out.gn = false;
  }
  return out;
}

}  // namespace graphnls
