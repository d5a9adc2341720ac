#include <cmath>

#include <gtest/gtest.h>

#include "graphnls/error.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/functional.hpp"
#include "graphnls/verify.hpp"

namespace graphnls {
namespace {

GraphFunction soliton_on_line(double h, double lambda) {
  const auto mesh = build_mesh(fixtures::real_line(), h, 30.0);
  const SolitonProfile phi(4.0, lambda);
  return sample(mesh, [&](std::size_t, double x) { return phi(x); });
}

TEST(Verify, ResidualOfExactSolitonIsSecondOrder) {
  const double coarse = el_residual(soliton_on_line(0.02, 1.0), 1.0, 4.0);
  const double fine = el_residual(soliton_on_line(0.01, 1.0), 1.0, 4.0);
  EXPECT_LT(fine, 1e-3);
  EXPECT_NEAR(coarse / fine, 4.0, 0.4);
  const auto norms = el_residual_norms(soliton_on_line(0.01, 1.0), 1.0, 4.0);
  EXPECT_GE(norms.max, 0.0);
  EXPECT_NEAR(norms.l2, fine, 1e-15);
  // A wrong multiplier leaves an O(1) residual.
  EXPECT_GT(el_residual(soliton_on_line(0.01, 1.0), 1.5, 4.0), 0.1);
}

TEST(Verify, KirchhoffStencil) {
  const auto mesh = build_mesh(fixtures::real_line(), 0.1, 20.0);
  // 1 - x^2 near the vertex on both sides: the stencil is exact and both
  // outgoing derivatives vanish.
  const auto even = sample(mesh, [](std::size_t, double x) { return x < 0.5 ? 1.0 - x * x : 0.75; });
  EXPECT_NEAR(kirchhoff_residual(even), 0.0, 1e-12);
  // Tent 1 - x on both sides: two outgoing slopes of -1.
  const auto tent = sample(mesh, [](std::size_t, double x) { return std::max(0.0, 1.0 - x); });
  EXPECT_NEAR(kirchhoff_residual(tent), 2.0, 1e-12);
  // Quadratic 1 + x - x^2 on each halfline near the vertex: the stencil is exact.
  const auto quad = sample(mesh, [](std::size_t, double x) { return x < 1.0 ? 1.0 + x - x * x : 1.0; });
  EXPECT_NEAR(kirchhoff_residual(quad), 2.0, 1e-12);
}

TEST(Verify, KirchhoffConsistentFlavorOnExactSoliton) {
  const auto u = soliton_on_line(0.01, 1.0);
  EXPECT_LT(kirchhoff_residual(u, 1.0, 4.0), 1e-6);
}

TEST(Verify, LocalizationMargin) {
  const auto mesh = build_mesh(fixtures::example(4), 0.1, 20.0);
  const auto& g = mesh->graph();
  const auto e = g.edge_index("e");
  const auto f = g.edge_index("f");
  const auto u = sample(mesh, [&](std::size_t k, double x) {
    if (k == e) return 3.0 * std::sin(M_PI * x / 2.0);
    if (k == f) return 1.0 * std::sin(M_PI * x / 4.0);
    return 0.0;
  });
  EXPECT_NEAR(localization_margin(u, e), 2.0, 1e-12);
  EXPECT_NEAR(localization_margin(u, "f"), -2.0, 1e-12);
  EXPECT_THROW(localization_margin(u, "zz"), Error);
}

TEST(Verify, CertifyBoundState) {
  SolveConfig cfg;
  const auto r = minimize_on_edge(fixtures::line_with_edge(10.0), "e", 4.0, 4.0, cfg);
  const auto v = certify(r, make_model(4.0));
  EXPECT_TRUE(v.residuals_pass);
  EXPECT_TRUE(v.positivity);
  EXPECT_GT(v.min_relative_value, 0.0);
  EXPECT_TRUE(v.lambda_positive);
  EXPECT_FALSE(v.sandwich);
  EXPECT_TRUE(v.ge3);
  EXPECT_EQ(v.measured_n, 2);
  EXPECT_TRUE(v.gn);
  EXPECT_LE(v.gn_ratio, v.gn_bound);
  EXPECT_LE(v.linf_ratio, 1.0);
  ASSERT_TRUE(v.localization_margin);
  EXPECT_GT(*v.localization_margin, 0.0);
  EXPECT_TRUE(v.passed());
  EXPECT_NEAR(v.line_level, -64.0 / 96.0, 1e-14);
}

TEST(Verify, CertifyGroundStateSandwich) {
  SolveConfig cfg;
  const auto r = ground_state(fixtures::halfline(), 2.0, 4.0, cfg);
  const auto v = certify(r, make_model(4.0));
  ASSERT_TRUE(v.sandwich);
  EXPECT_TRUE(*v.sandwich);
  EXPECT_FALSE(v.localization_margin);
  EXPECT_EQ(v.measured_n, 1);
  EXPECT_TRUE(v.passed());
}

TEST(Verify, CertifyFlagsBadState) {
  SolveConfig cfg;
  auto r = minimize_on_edge(fixtures::line_with_edge(10.0), "e", 4.0, 4.0, cfg);
  r.lambda *= 1.5;
  r.minimizer.values()[r.minimizer.mesh().edge(1).dofs[3]] = -1e-3;
  const auto v = certify(r, make_model(4.0));
  EXPECT_FALSE(v.residuals_pass);
  EXPECT_FALSE(v.positivity);
  EXPECT_FALSE(v.passed());
}

}  // namespace
}  // namespace graphnls
