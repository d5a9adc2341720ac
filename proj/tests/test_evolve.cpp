#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "graphnls/error.hpp"
#include "graphnls/evolve.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/functional.hpp"
#include "support.hpp"

namespace graphnls {
namespace {

using Complex = std::complex<double>;

std::shared_ptr<const Mesh> shared_mesh() {
  static const auto mesh = build_mesh(fixtures::example(4), 0.05, 20.0);
  return mesh;
}

ComplexGraphFunction bump_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto mesh = shared_mesh();
  auto u = to_complex(testing::random_bumps(mesh, rng));
  // A position-dependent phase makes the state non-stationary.
  for (const auto& em : mesh->edges()) {
    for (std::size_t k = 1; k + 1 < em.nodes(); ++k) u.values()[em.dofs[k]] *= std::polar(1.0, 0.3 * em.coordinate(k));
  }
  return u;
}

EvolveOptions short_run() {
  EvolveOptions o;
  o.final_time = 0.2;
  o.dt = 1e-3;
  o.stride = 50;
  return o;
}

TEST(Evolve, ZeroStaysZero) {
  const auto mesh = build_mesh(fixtures::example(3), 0.1, 20.0);
  const auto t = evolve(ComplexGraphFunction(mesh), 4.0, short_run());
  EXPECT_EQ(t.final_state.values().norm(), 0.0);
  EXPECT_EQ(t.steps, 200);
}

TEST(Evolve, ConservesMassAndEnergy) {
  const auto u0 = bump_state(1);
  const auto t = evolve(u0, 4.0, short_run());
  EXPECT_LT(t.mass_drift, 1e-10 * mass(u0));
  EXPECT_LT(t.energy_drift, 1e-4 * std::abs(energy(u0, 4.0).total));
  ASSERT_EQ(t.times.size(), t.masses.size());
  EXPECT_NEAR(t.times.back(), 0.2, 1e-12);
  EXPECT_GT((t.final_state.values() - u0.values()).norm(), 1e-3);
}

TEST(Evolve, CommutesWithGlobalPhase) {
  const auto u0 = bump_state(2);
  auto rotated = u0;
  const Complex phase = std::polar(1.0, 1.1);
  rotated.values() *= phase;
  const auto a = evolve(u0, 3.0, short_run());
  const auto b = evolve(rotated, 3.0, short_run());
  EXPECT_LT((a.final_state.values() * phase - b.final_state.values()).norm(), 1e-8 * u0.values().norm());
}

TEST(Evolve, TimeReversal) {
  // Conjugation reverses time for the symmetric scheme.
  const auto u0 = bump_state(3);
  const auto forward = evolve(u0, 4.0, short_run());
  auto back = forward.final_state;
  back.values() = back.values().conjugate();
  const auto returned = evolve(back, 4.0, short_run());
  EXPECT_LT((returned.final_state.values().conjugate() - u0.values()).norm(), 1e-7 * u0.values().norm());
}

TEST(Evolve, ObserverAndSnapshots) {
  auto o = short_run();
  o.keep_snapshots = true;
  int calls = 0;
  const auto t = evolve(bump_state(4), 4.0, o, [&](double, const ComplexGraphFunction&) { ++calls; });
  EXPECT_EQ(static_cast<std::size_t>(calls), t.times.size());
  EXPECT_EQ(t.snapshots.size(), t.times.size());
}

TEST(Evolve, SolitonRotatesAsAWhole) {
  // u(t) = e^{i lambda t} phi with lambda = 1.
  const auto mesh = build_mesh(fixtures::real_line(), 0.02, 30.0);
  const SolitonProfile phi(4.0, 1.0);
  const auto u0 = to_complex(sample(mesh, [&](std::size_t, double x) { return phi(x); }));
  auto o = short_run();
  o.final_time = 1.0;
  const auto t = evolve(u0, 4.0, o);
  auto expected = u0;
  expected.values() *= std::polar(1.0, 1.0);
  EXPECT_LT(orbital_distance(t.final_state, u0), 1e-3);
  EXPECT_LT((t.final_state.values() - expected.values()).norm() / u0.values().norm(), 1e-2);
}

TEST(Evolve, OrbitalDistanceClosedForm) {
  const auto u = bump_state(5);
  auto v = u;
  v.values() *= std::polar(1.0, -2.0);
  EXPECT_LT(orbital_distance(u, v), 1e-9);

  // Brute-force minimum over a fine phase grid of the H1 norm built from
  // the mass and gradient functionals.
  const auto w = bump_state(6);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20000; ++k) {
    auto d = u;
    d.values() = std::polar(1.0, 2.0 * M_PI * k / 20000.0) * u.values() - w.values();
    best = std::min(best, std::sqrt(mass(d) + gradient_norm_squared(d)));
  }
  EXPECT_NEAR(orbital_distance(u, w), best, 1e-6 * best);

  const auto other = build_mesh(fixtures::example(4), 0.05, 20.0);
  EXPECT_THROW(orbital_distance(u, ComplexGraphFunction(other)), Error);
}

TEST(Evolve, StabilityProbeOfLineSoliton) {
  SolveConfig cfg;
  cfg.h = 0.02;
  const auto r = minimize_on_edge(fixtures::line_with_edge(10.0), "e", 4.0, 4.0, cfg);
  StabilityOptions o;
  o.final_time = 0.5;
  o.dt = 1e-2;
  o.stride = 10;
  o.epsilon = 0.0;
  const auto still = stability_probe(r, o);
  EXPECT_LT(still.max_distance, 1e-4);
  o.epsilon = 1e-2;
  const auto kicked = stability_probe(r, o);
  EXPECT_GT(kicked.max_distance, 1e-3);
  EXPECT_LT(kicked.max_distance, 0.1);
  EXPECT_LT(kicked.mass_drift, 1e-8);
}

}  // namespace
}  // namespace graphnls
