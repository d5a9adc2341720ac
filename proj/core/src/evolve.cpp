#include "graphnls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/SparseLU>

#include "graphnls/error.hpp"
#include "graphnls/functional.hpp"

namespace graphnls {

namespace {

using Complex = std::complex<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;

ComplexSparse with_dirichlet_identity(const Mesh& mesh, ComplexSparse a) {
  for (int col = 0; col < a.outerSize(); ++col) {
    for (ComplexSparse::InnerIterator it(a, col); it; ++it) {
      if (mesh.dirichlet(it.row()) || mesh.dirichlet(it.col())) {
        it.valueRef() = (it.row() == it.col()) ? Complex(1.0) : Complex(0.0);
      }
    }
  }
  a.prune(Complex(0.0));
  return a;
}

double h1_norm_squared(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXcd& w) {
  return std::real(w.dot(a.cast<Complex>() * w));
}

}  // namespace

Trajectory evolve(const ComplexGraphFunction& u0, double p, const EvolveOptions& options,
                  const EvolveObserver& observer) {
  check_exponent(p);
  if (!(options.final_time > 0.0) || !(options.dt > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "final time and time step must be positive");
  }
  if (options.dt > options.final_time) throw Error(ErrorKind::kInvalidArgument, "time step exceeds final time");
  if (options.stride < 1) throw Error(ErrorKind::kInvalidArgument, "stride must be at least 1");

  const Mesh& mesh = u0.mesh();
  const ComplexSparse k = stiffness_matrix(mesh).cast<Complex>();
  const ComplexSparse m = mass_matrix(mesh).cast<Complex>();
  const Complex half(0.0, 0.5 * options.dt);
  const ComplexSparse lhs = with_dirichlet_identity(mesh, ComplexSparse(m + half * k));
  const ComplexSparse rhs_op = ComplexSparse(m - half * k);

  Eigen::SparseLU<ComplexSparse> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::kNumerical, "time-step matrix factorization failed");

  const auto steps = static_cast<int>(std::llround(options.final_time / options.dt));
  Trajectory out;
  ComplexGraphFunction u = u0;
  zero_dirichlet(mesh, u.values());

  auto record = [&](int step) {
    const double t = step * options.dt;
    out.times.push_back(t);
    out.masses.push_back(mass(u));
    out.energies.push_back(energy(u, p).total);
    if (options.keep_snapshots) out.snapshots.push_back(u);
    if (observer) observer(t, u);
  };
  record(0);

  const Complex i_dt(0.0, options.dt);
  for (int n = 1; n <= steps; ++n) {
    Eigen::VectorXcd base = rhs_op * u.values();
    zero_dirichlet(mesh, base);
    ComplexGraphFunction mid = u;
    Eigen::VectorXcd next = u.values();
    bool settled = false;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      Eigen::VectorXcd rhs = base + i_dt * nonlinear_load(mid, p);
      zero_dirichlet(mesh, rhs);
      next = lu.solve(rhs);
      Eigen::VectorXcd updated = 0.5 * (u.values() + next);
      const double change = (updated - mid.values()).cwiseAbs().maxCoeff();
      const double size = std::max(1.0, updated.cwiseAbs().maxCoeff());
      mid.values() = std::move(updated);
      if (change <= options.fixed_point_tol * size) {
        settled = true;
        break;
      }
    }
    if (!settled) throw Error(ErrorKind::kNumerical, "fixed-point iteration did not converge");
    // Final update from the converged midpoint.
    Eigen::VectorXcd rhs = base + i_dt * nonlinear_load(mid, p);
    zero_dirichlet(mesh, rhs);
    next = lu.solve(rhs);
    if (!next.allFinite()) throw Error(ErrorKind::kNumerical, "time stepping produced NaN");
    u.values() = std::move(next);
    if (n % options.stride == 0 || n == steps) record(n);
  }

  out.steps = steps;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    out.mass_drift = std::max(out.mass_drift, std::abs(out.masses[i] - out.masses.front()));
    out.energy_drift = std::max(out.energy_drift, std::abs(out.energies[i] - out.energies.front()));
  }
  out.final_state = std::move(u);
  return out;
}

double orbital_distance(const ComplexGraphFunction& u, const ComplexGraphFunction& v) {
  if (&u.mesh() != &v.mesh()) throw Error(ErrorKind::kInvalidArgument, "functions live on different meshes");
  const Eigen::SparseMatrix<double> a = stiffness_matrix(u.mesh()) + mass_matrix(u.mesh());
  const ComplexSparse ac = a.cast<Complex>();
  const double uu = std::real(u.values().dot(ac * u.values()));
  const double vv = std::real(v.values().dot(ac * v.values()));
  // <v, u>_H; |e^(i t) u - v|^2 = uu + vv - 2 Re(e^(i t) s)
  const Complex s = v.values().dot(ac * u.values());
  auto dist2 = [&](double t) { return uu + vv - 2.0 * std::real(std::polar(1.0, t) * s); };

  constexpr int kGrid = 256;
  const double step = 2.0 * M_PI / kGrid;
  int best = 0;
  for (int i = 1; i < kGrid; ++i) {
    if (dist2(i * step) < dist2(best * step)) best = i;
  }
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = dist2(x1);
  double f2 = dist2(x2);
  for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = dist2(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = dist2(x2);
    }
  }
  const double found = std::min({f1, f2, dist2(best * step)});
  return std::sqrt(std::max(0.0, found));
}

StabilityReport stability_probe(const SolveReport& report, const StabilityOptions& options) {
  if (report.minimizer.empty()) throw Error(ErrorKind::kInvalidArgument, "report has no minimizer");
  if (!(options.epsilon >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "epsilon must be nonnegative");
  const auto mesh = report.minimizer.mesh_ptr();
  const ComplexGraphFunction bound = to_complex(report.minimizer);

  ComplexGraphFunction start = bound;
  if (options.epsilon > 0.0) {
    const GraphFunction re = random_smooth_function(mesh, options.seed, 0.5);
    const GraphFunction im = random_smooth_function(mesh, options.seed + 0x9e3779b97f4a7c15ULL, 0.5);
    Eigen::VectorXcd eta = re.values().cast<Complex>() + Complex(0.0, 1.0) * im.values().cast<Complex>();
    const Eigen::SparseMatrix<double> a = stiffness_matrix(*mesh) + mass_matrix(*mesh);
    eta /= std::sqrt(h1_norm_squared(a, eta));
    start.values() += options.epsilon * eta;
    start = project_mass(start, mass(report.minimizer));
  }

  StabilityReport out;
  out.epsilon = options.epsilon;
  EvolveOptions evo;
  evo.final_time = options.final_time;
  evo.dt = options.dt;
  evo.stride = options.stride;
  const Trajectory traj = evolve(start, report.p, evo, [&](double t, const ComplexGraphFunction& u) {
    out.times.push_back(t);
    out.orbital_distances.push_back(orbital_distance(u, bound));
  });
  out.max_distance = *std::max_element(out.orbital_distances.begin(), out.orbital_distances.end());
  out.mass_drift = traj.mass_drift;
  out.energy_drift = traj.energy_drift;
  const double e0 = std::abs(traj.energies.front());
  out.relative_energy_drift = e0 > 0.0 ? traj.energy_drift / e0 : traj.energy_drift;
  return out;
}

}  // namespace graphnls
