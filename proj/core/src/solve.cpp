#include "graphnls/solve.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/SparseCholesky>

#include "graphnls/error.hpp"
#include "graphnls/verify.hpp"

namespace graphnls {

std::string_view to_string(StepRule rule) {
  return rule == StepRule::kFixed ? "fixed" : "adaptive-two-point";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kInterior:
      return "interior";
    case SolveStatus::kConstraintActive:
      return "constraint-active";
    case SolveStatus::kEscaped:
      return "escaped";
    case SolveStatus::kNotConverged:
      return "not-converged";
  }
  return "not-converged";
}

StepRule parse_step_rule(std::string_view text) {
  if (text == "fixed") return StepRule::kFixed;
  if (text == "adaptive-two-point") return StepRule::kAdaptiveTwoPoint;
  throw Error(ErrorKind::kInvalidArgument, "unknown step rule '" + std::string(text) + "'");
}

SolveStatus parse_status(std::string_view text) {
  for (SolveStatus s : {SolveStatus::kInterior, SolveStatus::kConstraintActive, SolveStatus::kEscaped,
                        SolveStatus::kNotConverged}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorKind::kParse, "unknown status '" + std::string(text) + "'");
}

void SolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  if (max_iterations < 1) throw Error(ErrorKind::kInvalidArgument, "max iterations must be at least 1");
  if (!(fixed_step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "fixed step must be positive");
  if (!(h > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mesh spacing must be positive");
  if (truncation && !(*truncation > 0.0)) throw Error(ErrorKind::kInvalidArgument, "truncation must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::kInvalidArgument, "epsilon must lie in (0, 1)");
  if (max_restarts < 0 || random_starts < 0) throw Error(ErrorKind::kInvalidArgument, "negative restart count");
  if (jobs < 1) throw Error(ErrorKind::kInvalidArgument, "jobs must be at least 1");
}

namespace {

template <class F>
F project_impl(const F& u, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass must be positive");
  const double m = mass(u);
  if (!(m > 0.0)) throw Error(ErrorKind::kInvalidArgument, "cannot project the zero function");
  F out = u;
  out.values() *= std::sqrt(mu / m);
  return out;
}

}  // namespace

GraphFunction project_mass(const GraphFunction& u, double mu) { return project_impl(u, mu); }
ComplexGraphFunction project_mass(const ComplexGraphFunction& u, double mu) { return project_impl(u, mu); }

double lagrange_multiplier(const GraphFunction& u, double p) {
  check_exponent(p);
  const double m = mass(u);
  if (!(m > 0.0)) throw Error(ErrorKind::kInvalidArgument, "multiplier of the zero function");
  return (lp_integral(u, p) - gradient_norm_squared(u)) / m;
}

namespace {

using Factor = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

void factor(const Mesh& mesh, const Eigen::SparseMatrix<double>& k, const Eigen::SparseMatrix<double>& m,
            double shift, Factor& out) {
  Eigen::SparseMatrix<double> a = k + shift * m;
  apply_dirichlet_identity(mesh, a);
  out.compute(a);
  if (out.info() != Eigen::Success) throw Error(ErrorKind::kNumerical, "preconditioner factorization failed");
}

}  // namespace

GraphFunction random_smooth_function(std::shared_ptr<const Mesh> mesh, std::uint64_t seed, double correlation) {
  if (!(correlation > 0.0)) throw Error(ErrorKind::kInvalidArgument, "correlation length must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXd xi(mesh->dofs());
  for (Index i = 0; i < mesh->dofs(); ++i) xi[i] = mesh->dirichlet(i) ? 0.0 : uniform(rng);
  const auto k = stiffness_matrix(*mesh);
  const auto m = mass_matrix(*mesh);
  Factor f;
  factor(*mesh, k, m, 1.0 / (correlation * correlation), f);
  Eigen::VectorXd rhs = m * xi;
  zero_dirichlet(*mesh, rhs);
  return GraphFunction(mesh, f.solve(rhs));
}

std::shared_ptr<const Mesh> solver_mesh(const MetricGraph& graph, double mu, double p, const SolveConfig& cfg) {
  if (cfg.truncation) return build_mesh(graph, cfg.h, *cfg.truncation);
  return build_mesh(graph, cfg.h, AutoTruncation{mu, p});
}

DescentResult descend(const GraphFunction& start, double mu, double p, const SolveConfig& cfg,
                      const DescentMonitor& monitor) {
  cfg.validate();
  check_exponent(p);
  const Mesh& mesh = start.mesh();
  const auto k = stiffness_matrix(mesh);
  const auto m = mass_matrix(mesh);
  const Eigen::VectorXd lumped = lumped_mass(mesh);
  Eigen::VectorXd inv_lumped(mesh.dofs());
  for (Index i = 0; i < mesh.dofs(); ++i) inv_lumped[i] = mesh.dirichlet(i) ? 0.0 : 1.0 / lumped[i];

  const double scale = std::max(1.0, mu);
  const double target = cfg.tolerance * scale;
  const double eps = std::numeric_limits<double>::epsilon();

  DescentResult out;
  out.u = project_mass(start, mu);
  zero_dirichlet(mesh, out.u.values());

  Factor pre;
  double shift = -1.0;
  bool absolute_taken = false;
  double tau = cfg.step_rule == StepRule::kFixed ? cfg.fixed_step : 1.0;
  Eigen::VectorXd prev_u;
  Eigen::VectorXd prev_r;
  EnergyBreakdown current = energy(out.u, p);

  for (int it = 0;; ++it) {
    Eigen::VectorXd& u = out.u.values();
    const Eigen::VectorXd g = grad_energy(out.u, p);
    Eigen::VectorXd mu_vec = m * u;
    zero_dirichlet(mesh, mu_vec);
    const double lambda = -u.dot(g) / u.dot(mu_vec);
    const Eigen::VectorXd r = g + lambda * mu_vec;
    const double norm = std::sqrt(r.cwiseProduct(r).dot(inv_lumped));
    out.lambda = lambda;
    out.gradient_norm = norm;
    out.iterations = it;
    if (!std::isfinite(norm) || !std::isfinite(current.total)) {
      throw Error(ErrorKind::kNumerical, "descent produced a non-finite state");
    }

    if (!absolute_taken && (norm < 1e-3 * scale || it >= 200)) {
      u = u.cwiseAbs();
      absolute_taken = true;
      current = energy(out.u, p);
      prev_u.resize(0);
      continue;
    }
    if (absolute_taken && norm < target) {
      out.converged = true;
      break;
    }
    if (it >= cfg.max_iterations) break;

    const double wanted = lambda > 0.0 ? lambda : 1.0;
    if (shift < 0.0 || std::abs(wanted - shift) > 0.5 * shift) {
      shift = wanted;
      factor(mesh, k, m, shift, pre);
    }

    if (cfg.step_rule == StepRule::kAdaptiveTwoPoint && prev_u.size() == u.size()) {
      const Eigen::VectorXd s = u - prev_u;
      const Eigen::VectorXd y = r - prev_r;
      const double sy = s.dot(y);
      const double sps = s.dot(k * s) + shift * s.dot(m * s);
      if (sy > 0.0 && std::isfinite(sps / sy)) tau = std::clamp(sps / sy, 1e-6, 1e3);
    }

    const Eigen::VectorXd z = pre.solve(g);
    const Eigen::VectorXd w = pre.solve(mu_vec);
    Eigen::VectorXd d = z - (mu_vec.dot(z) / mu_vec.dot(w)) * w;
    zero_dirichlet(mesh, d);

    const double slack = 64.0 * eps * (current.kinetic + std::abs(current.potential));
    bool accepted = false;
    double step = tau;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      GraphFunction trial(out.u.mesh_ptr(), u - step * d);
      trial = project_mass(trial, mu);
      const EnergyBreakdown e = energy(trial, p);
      if (e.total <= current.total + slack) {
        prev_u = u;
        prev_r = r;
        out.u = std::move(trial);
        current = e;
        accepted = true;
        break;
      }
    }
    if (cfg.step_rule == StepRule::kFixed) tau = cfg.fixed_step;
    if (!accepted) break;
    if (monitor && !monitor(out.u, it + 1)) {
      out.interrupted = true;
      out.iterations = it + 1;
      return out;
    }
  }

  if (out.converged) {
    out.u.values() = out.u.values().cwiseAbs();
    out.lambda = lagrange_multiplier(out.u, p);
  }
  return out;
}

namespace {

bool has_negative_free_values(const GraphFunction& u) {
  for (Index i = 0; i < u.values().size(); ++i) {
    if (!u.mesh().dirichlet(i) && u.values()[i] < 0.0) return true;
  }
  return false;
}

std::vector<char> edge_dofs(const Mesh& mesh, std::size_t e) {
  std::vector<char> out(static_cast<std::size_t>(mesh.dofs()), 0);
  for (Index dof : mesh.edge(e).dofs) out[static_cast<std::size_t>(dof)] = 1;
  return out;
}

// Mass carried by the far half of every truncated halfline.
double far_halfline_mass(const GraphFunction& u) {
  double total = 0.0;
  for (const EdgeMesh& em : u.mesh().edges()) {
    if (!em.halfline) continue;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      if (em.coordinate(i) < 0.5 * em.length) continue;
      const double a = u.values()[em.dofs[i]];
      const double b = u.values()[em.dofs[i + 1]];
      total += em.spacing / 3.0 * (a * a + a * b + b * b);
    }
  }
  return total;
}

GraphFunction perturb(const GraphFunction& u, double mu, std::uint64_t seed) {
  GraphFunction noise = random_smooth_function(u.mesh_ptr(), seed);
  const double peak = u.values().cwiseAbs().maxCoeff();
  const double noise_peak = noise.values().cwiseAbs().maxCoeff();
  GraphFunction out = u;
  if (noise_peak > 0.0) out.values() += (1e-3 * peak / noise_peak) * noise.values();
  return project_mass(out, mu);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  std::uint64_t out = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

SolveReport base_report(DescentResult&& result, double mu, double p, const SolveConfig& cfg) {
  SolveReport r;
  r.minimizer = std::move(result.u);
  r.energy = energy(r.minimizer, p);
  r.lambda = lagrange_multiplier(r.minimizer, p);
  r.mass = mass(r.minimizer);
  r.requested_mass = mu;
  r.p = p;
  r.mass_loss = far_halfline_mass(r.minimizer);
  r.migration = r.mass_loss > 1e-3 * mu;
  r.el_residual = el_residual(r.minimizer, r.lambda, p);
  r.kirchhoff_residual = kirchhoff_residual(r.minimizer, r.lambda, p);
  r.gradient_norm = result.gradient_norm;
  r.converged = result.converged;
  r.iterations = result.iterations;
  r.peak = argmax(r.minimizer);
  r.config = cfg;
  if (r.migration) r.diagnostics.push_back("mass migrating toward the halfline truncation");
  return r;
}

// Bump on e used when no competitor fits: a sine arch, or a quarter cosine
// peaked at the tip of a terminal edge. Higher powers make it narrower.
GraphFunction fallback_bump(std::shared_ptr<const Mesh> mesh, std::size_t e, std::optional<std::size_t> tip,
                            int power) {
  const MetricGraph& g = mesh->graph();
  const double len = g.edge(e).length;
  const bool tip_at_start = tip && *tip == g.from_vertex(e);
  Placement pl;
  pl.edge = e;
  pl.begin = 0.0;
  pl.end = len;
  if (tip) {
    pl.profile = [=](double x) {
      const double s = tip_at_start ? x : len - x;
      return std::pow(std::cos(0.5 * M_PI * s / len), power);
    };
  } else {
    pl.profile = [=](double x) { return std::pow(std::sin(M_PI * x / len), power); };
  }
  return interpolate(mesh, std::span<const Placement>(&pl, 1));
}

struct Start {
  GraphFunction u;
  bool fits = true;
  double epsilon = 0.0;
};

Start edge_start(const SolitonModel& model, double mu, double epsilon, std::shared_ptr<const Mesh> mesh,
                 std::size_t e, bool terminal, int attempt) {
  const double compression = std::pow(2.0, attempt);
  for (double eps = epsilon;; eps = std::min(0.9, 2.0 * eps)) {
    try {
      return Start{compact_competitor(model, mu, eps, mesh, e, terminal, compression), true, eps};
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kInvalidArgument) throw;
    }
    if (eps >= 0.9) break;
  }
  const auto tip = terminal ? terminal_tip(mesh->graph(), e) : std::nullopt;
  return Start{project_mass(fallback_bump(mesh, e, tip, 1 + 2 * attempt), mu), false, 0.0};
}

template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Consecutive accepted steps with the maximum off the edge that count as an escape.
constexpr int kEscapeSteps = 20;

SolveReport minimize_on_edge_index(const MetricGraph& graph, std::size_t e, double mu, double p,
                                   const SolveConfig& cfg) {
  cfg.validate();
  check_exponent(p);
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass must be positive");
  const Edge& edge = graph.edge(e);
  if (edge.halfline()) throw Error(ErrorKind::kInvalidArgument, "edge '" + edge.id + "' is a halfline");

  const SolitonModel model = make_model(p);
  const auto mesh = solver_mesh(graph, mu, p, cfg);
  const Classification cls = classify_edges(graph);
  const bool terminal = cls.edges[e].topology == EdgeTopology::kTerminal;
  const std::vector<char> on_edge = edge_dofs(*mesh, e);

  std::vector<std::string> notes;
  for (std::size_t v : {graph.from_vertex(e), graph.to_vertex(e)}) {
    if (graph.degree(v) == 2) notes.push_back("endpoint '" + graph.vertices()[v] + "' has degree 2");
  }

  DescentResult result;
  bool fits = true;
  int restarts = 0;
  for (int attempt = 0;; ++attempt) {
    Start start = edge_start(model, mu, cfg.epsilon, mesh, e, terminal, attempt);
    if (attempt == 0) fits = start.fits;
    const GraphFunction u0 = perturb(start.u, mu, mix_seed(cfg.seed, 1000 * e + static_cast<std::uint64_t>(attempt)));
    int away = 0;
    auto monitor = [&](const GraphFunction& u, int) {
      away = on_edge[static_cast<std::size_t>(argmax(u).dof)] ? 0 : away + 1;
      return away < kEscapeSteps;
    };
    result = descend(u0, mu, p, cfg, monitor);
    if (!result.interrupted || attempt >= cfg.max_restarts) break;
    ++restarts;
  }

  const bool interrupted = result.interrupted;
  SolveReport r = base_report(std::move(result), mu, p, cfg);
  r.edge = e;
  r.restarts = restarts;
  r.competitor_fit = fits;
  r.localization_margin = localization_margin(r.minimizer, e);
  r.diagnostics.insert(r.diagnostics.begin(), notes.begin(), notes.end());
  if (!fits) r.diagnostics.push_back("competitor does not fit; started from a bump");

  const ArgMax& peak = r.peak;
  const bool peak_on_e = on_edge[static_cast<std::size_t>(peak.dof)] != 0;
  if (interrupted) {
    r.status = SolveStatus::kEscaped;
  } else if (!r.converged) {
    r.status = SolveStatus::kNotConverged;
  } else if (!peak_on_e || r.migration) {
    r.status = SolveStatus::kEscaped;
  } else {
    // Position of the peak along e and whether it sits on a shared vertex.
    const EdgeMesh& em = mesh->edge(e);
    double x = 0.0;
    for (std::size_t k = 0; k < em.nodes(); ++k) {
      if (em.dofs[k] == peak.dof) {
        x = em.coordinate(k);
        break;
      }
    }
    const auto vertex = mesh->dof_vertex(peak.dof);
    const bool shared_vertex = vertex && graph.degree(*vertex) > 1;
    double branch_distance = std::numeric_limits<double>::infinity();
    if (graph.degree(graph.from_vertex(e)) >= 3) branch_distance = std::min(branch_distance, x);
    if (graph.degree(graph.to_vertex(e)) >= 3) branch_distance = std::min(branch_distance, em.length - x);
    const bool near_branch = branch_distance <= 2.0 * cfg.h;
    if (shared_vertex || near_branch || !(r.localization_margin > 0.0)) {
      r.status = SolveStatus::kConstraintActive;
    } else {
      r.status = SolveStatus::kInterior;
    }
  }
  if (r.status == SolveStatus::kInterior && has_negative_free_values(r.minimizer)) {
    r.diagnostics.push_back("negative nodal values after sign normalization");
  }
  return r;
}

}  // namespace

SolveReport minimize_on_edge(const MetricGraph& graph, std::string_view edge, double mu, double p,
                             const SolveConfig& cfg) {
  return minimize_on_edge_index(graph, graph.edge_index(edge), mu, p, cfg);
}

std::vector<SolveReport> bound_state_catalogue(const MetricGraph& graph, double mu, double p,
                                               const SolveConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> bounded;
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    if (!graph.edge(e).halfline()) bounded.push_back(e);
  }
  if (bounded.empty()) throw Error(ErrorKind::kInvalidArgument, "graph has no bounded edge");
  std::vector<SolveReport> out(bounded.size());
  parallel_for(bounded.size(), cfg.jobs,
               [&](std::size_t i) { out[i] = minimize_on_edge_index(graph, bounded[i], mu, p, cfg); });
  return out;
}

ScanReport scan_mass_threshold(const MetricGraph& graph, std::string_view edge, double p,
                               std::span<const double> grid, const SolveConfig& cfg) {
  cfg.validate();
  if (grid.empty()) throw Error(ErrorKind::kInvalidArgument, "mass grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorKind::kInvalidArgument, "mass grid must increase");
  }
  const std::size_t e = graph.edge_index(edge);
  if (graph.edge(e).halfline()) throw Error(ErrorKind::kInvalidArgument, "edge '" + std::string(edge) + "' is a halfline");

  ScanReport out;
  out.masses.assign(grid.begin(), grid.end());
  out.reports.resize(grid.size());
  parallel_for(grid.size(), cfg.jobs,
               [&](std::size_t i) { out.reports[i] = minimize_on_edge_index(graph, e, grid[i], p, cfg); });

  auto interior = [&](std::size_t i) {
    return out.reports[i].status == SolveStatus::kInterior && out.reports[i].localization_margin > 0.0;
  };
  std::optional<std::size_t> settled;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!out.threshold && interior(i)) out.threshold = grid[i];
    if (!out.fitting_threshold && out.reports[i].competitor_fit) out.fitting_threshold = grid[i];
    if (!settled && i > 0 && interior(i) && interior(i - 1)) settled = i;
    if (settled && i > *settled && !interior(i)) out.monotonicity_violations.push_back(grid[i]);
  }
  return out;
}

SolveReport ground_state(const MetricGraph& graph, double mu, double p, const SolveConfig& cfg) {
  cfg.validate();
  check_exponent(p);
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass must be positive");
  const SolitonModel model = make_model(p);
  const auto mesh = solver_mesh(graph, mu, p, cfg);
  const Classification cls = classify_edges(graph);

  std::vector<GraphFunction> starts;
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    if (graph.edge(e).halfline()) continue;
    const bool terminal = cls.edges[e].topology == EdgeTopology::kTerminal;
    starts.push_back(edge_start(model, mu, cfg.epsilon, mesh, e, terminal, 0).u);
  }
  // Star-shaped profile at each vertex: equal half-solitons on every edge end.
  for (std::size_t v = 0; v < graph.vertices().size(); ++v) {
    const SolitonProfile phi = soliton_profile(model, 2.0 * mu / graph.degree(v));
    starts.push_back(project_mass(sample(mesh,
                                         [&](std::size_t e, double x) {
                                           const Edge& edge = graph.edge(e);
                                           double value = 0.0;
                                           if (graph.from_vertex(e) == v) value += phi(x);
                                           if (!edge.halfline() && graph.to_vertex(e) == v) {
                                             value += phi(edge.length - x);
                                           }
                                           return value;
                                         }),
                                  mu));
  }
  // Soliton in the middle of each truncated halfline.
  const SolitonProfile line = soliton_profile(model, mu);
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    if (!graph.edge(e).halfline()) continue;
    const double centre = 0.5 * mesh->truncation();
    Placement pl{e, 0.0, mesh->truncation(), [&](double x) { return line(x - centre); }};
    starts.push_back(project_mass(interpolate(mesh, std::span<const Placement>(&pl, 1)), mu));
  }
  for (int i = 0; i < cfg.random_starts; ++i) {
    starts.push_back(project_mass(random_smooth_function(mesh, mix_seed(cfg.seed, 7'000'000 + i), 1.0), mu));
  }

  // Short first round for every start, then full runs only for the starts
  // that are still competitive with the best converged state.
  SolveConfig first = cfg;
  first.max_iterations = std::min(cfg.max_iterations, 500);
  std::vector<DescentResult> results(starts.size());
  parallel_for(starts.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = descend(perturb(starts[i], mu, mix_seed(cfg.seed, 5'000'000 + i)), mu, p, first);
  });
  auto best_converged = [&] {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
      if (r.converged) best = std::min(best, energy(r.u, p).total);
    }
    return best;
  };
  std::vector<std::size_t> order(starts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> energies(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) energies[i] = energy(results[i].u, p).total;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return energies[a] < energies[b]; });
  for (std::size_t i : order) {
    if (results[i].converged || cfg.max_iterations <= first.max_iterations) continue;
    const double best = best_converged();
    if (energies[i] > best + 1e-6 * std::abs(best)) continue;
    SolveConfig rest = cfg;
    rest.max_iterations = cfg.max_iterations - results[i].iterations;
    const int used = results[i].iterations;
    results[i] = descend(results[i].u, mu, p, rest);
    results[i].iterations += used;
  }

  std::optional<std::size_t> pick;
  double best = std::numeric_limits<double>::infinity();
  int skipped = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].converged) {
      ++skipped;
      continue;
    }
    const double e = energy(results[i].u, p).total;
    if (e < best) {
      best = e;
      pick = i;
    }
  }
  if (!pick) throw Error(ErrorKind::kNumerical, "ground state search did not converge from any start");

  SolveReport r = base_report(std::move(results[*pick]), mu, p, cfg);
  r.ground_state = true;
  r.localization_margin = localization_margin(r.minimizer, r.peak.edge);
  if (skipped > 0) r.diagnostics.push_back(std::to_string(skipped) + " starts did not converge");
  const Edge& peak_edge = graph.edge(r.peak.edge);
  const bool on_halfline = peak_edge.halfline() && r.peak.coordinate > 2.0 * cfg.h;
  r.status = on_halfline ? SolveStatus::kEscaped : SolveStatus::kInterior;
  if (on_halfline) r.diagnostics.push_back("best state runs away along halfline '" + peak_edge.id + "'");
  if (!energy_levels(model, mu).in_sandwich(r.energy.total, 1e-3)) {
    r.diagnostics.push_back("energy outside the universal bounds");
  }
  return r;
}

}  // namespace graphnls
