#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "graphnls/mesh.hpp"

namespace graphnls::testing {

/// Nonnegative sum of a few smooth bumps with random centers, widths and
/// heights. Every bump is compactly supported inside one edge (or the first
/// part of a halfline) and vanishes at the edge ends, so the result is
/// continuous regardless of how vertices are shared.
inline GraphFunction random_bumps(std::shared_ptr<const Mesh> mesh, std::mt19937_64& rng, int bumps = 4) {
  const auto& graph = mesh->graph();
  std::uniform_int_distribution<std::size_t> pick(0, graph.edges().size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Bump {
    std::size_t edge;
    double center, radius, height;
  };
  std::vector<Bump> list;
  for (int i = 0; i < bumps; ++i) {
    const std::size_t e = pick(rng);
    const double len = graph.edge(e).halfline() ? std::min(8.0, 0.5 * mesh->truncation()) : graph.edge(e).length;
    const double radius = (0.1 + 0.35 * unit(rng)) * len;
    const double center = radius + unit(rng) * (len - 2.0 * radius);
    list.push_back({e, center, radius, 0.2 + 2.0 * unit(rng)});
  }
  return sample(mesh, [&](std::size_t e, double x) {
    double v = 0.0;
    for (const auto& b : list) {
      if (b.edge != e) continue;
      const double t = (x - b.center) / b.radius;
      if (std::abs(t) < 1.0) v += b.height * std::pow(std::cos(0.5 * M_PI * t), 2);
    }
    return v;
  });
}

/// Random signed nodal vector, zero on Dirichlet DOFs.
inline Eigen::VectorXd random_direction(const Mesh& mesh, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd eta(mesh.dofs());
  for (Index i = 0; i < mesh.dofs(); ++i) eta[i] = mesh.dirichlet(i) ? 0.0 : normal(rng);
  return eta;
}

/// Multiplier of the unit-mass line soliton. The sech integral gives
/// mass(lambda) = c lambda^(k - 1/2) with k = 2/(p-2).
inline double unit_mass_lambda(double p) {
  const double k = 2.0 / (p - 2.0);
  const double integral = std::sqrt(M_PI) * std::tgamma(k) / std::tgamma(k + 0.5);
  // A^2 / B = (p/2)^k lambda^k / ((p-2)/2 sqrt(lambda))
  const double c = std::pow(0.5 * p, k) / (0.5 * (p - 2.0)) * integral;
  const double exponent = k - 0.5;
  return std::pow(1.0 / c, 1.0 / exponent);
}

/// Soliton energy constant from the Pohozaev identities:
/// theta = lambda_1 (6 - p) / (2 (p + 2)).
inline double theta_closed_form(double p) { return unit_mass_lambda(p) * (6.0 - p) / (2.0 * (p + 2.0)); }

}  // namespace graphnls::testing
