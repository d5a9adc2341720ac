#include <cmath>

#include <gtest/gtest.h>

#include "graphnls/error.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/functional.hpp"
#include "graphnls/soliton.hpp"
#include "support.hpp"

namespace graphnls {
namespace {

TEST(Soliton, ThetaFourIsOneOverNinetySix) {
  const auto m = make_model(4.0);
  EXPECT_NEAR(m.theta, 1.0 / 96.0, 1e-12);
  EXPECT_NEAR(m.unit_lambda, 1.0 / 16.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.beta, 1.0);
  EXPECT_DOUBLE_EQ(m.alpha, 1.0);
}

TEST(Soliton, ThetaMatchesPohozaevClosedForm) {
  for (double p : {2.2, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5}) {
    const auto m = make_model(p);
    EXPECT_NEAR(m.theta / testing::theta_closed_form(p), 1.0, 1e-9) << "p = " << p;
    EXPECT_NEAR(m.unit_lambda / testing::unit_mass_lambda(p), 1.0, 1e-9) << "p = " << p;
    EXPECT_GT(m.theta, 0.0);
  }
}

TEST(Soliton, ProfileSolvesTheEquation) {
  for (double p : {2.5, 3.0, 4.0, 5.0}) {
    const SolitonProfile phi(p, 1.7);
    for (double x : {0.0, 0.3, 1.0, 2.5, 6.0}) {
      EXPECT_NEAR(phi.residual(x), 0.0, 1e-11 * std::max(1.0, phi.amplitude())) << p << " " << x;
    }
    const double step = 1e-4;
    for (double x : {0.2, 1.1}) {
      const double fd = (phi(x + step) - phi(x - step)) / (2.0 * step);
      EXPECT_NEAR(phi.derivative(x), fd, 1e-6);
    }
  }
}

TEST(Soliton, ClosedFormProfileAtPFour) {
  // phi = sqrt(2 lambda) sech(sqrt(lambda) x) and mass 4 sqrt(lambda).
  const SolitonProfile phi(4.0, 2.25);
  EXPECT_NEAR(phi.amplitude(), std::sqrt(4.5), 1e-14);
  EXPECT_NEAR(phi(1.0), std::sqrt(4.5) / std::cosh(1.5), 1e-14);
  EXPECT_NEAR(phi.mass(), 6.0, 1e-12);
  EXPECT_NEAR(phi(800.0), 0.0, 1e-300);
}

TEST(Soliton, MassScaling) {
  const auto m = make_model(3.0);
  for (double mu : {0.5, 2.0, 10.0}) {
    EXPECT_NEAR(soliton_profile(m, mu).mass(), mu, 1e-10 * mu);
  }
}

TEST(Soliton, EnergyLevelsAndSandwich) {
  const auto m = make_model(4.0);
  const auto lv = energy_levels(m, 2.0);
  EXPECT_NEAR(lv.line, -8.0 / 96.0, 1e-14);
  EXPECT_NEAR(lv.halfline, -1.0 / 3.0, 1e-14);
  EXPECT_TRUE(lv.in_sandwich(-0.2, 0.0));
  EXPECT_FALSE(lv.in_sandwich(-0.05, 1e-3));
  EXPECT_FALSE(lv.in_sandwich(-0.34, 1e-3));
}

TEST(Soliton, GnConstants) {
  for (double p : {2.5, 4.0, 5.0}) {
    const auto c = gn_constants(make_model(p));
    // Halving the line soliton divides every integral by two.
    EXPECT_NEAR(c.halfline / c.line, std::pow(2.0, (p - 2.0) / 2.0), 1e-9);
  }
}

TEST(Soliton, CutProfileEnergyTarget) {
  const auto m = make_model(4.0);
  for (double eps : {0.01, 0.05, 0.3}) {
    const auto cut = cut_profile(m, eps);
    EXPECT_GT(cut.cut, 0.0);
    EXPECT_LE(cut.energy, -(1.0 - 0.9 * eps) * m.theta + 1e-12);
    EXPECT_GT(cut.energy, -m.theta);
    EXPECT_TRUE(std::isfinite(cut.half_width));
  }
  EXPECT_GT(cut_profile(m, 0.01).half_width, cut_profile(m, 0.3).half_width);
  EXPECT_THROW(cut_profile(m, 1.5), Error);
}

TEST(Soliton, FittingMassScalesWithLength) {
  const auto m = make_model(4.0);
  const double w = cut_profile(m, 0.05).half_width;
  EXPECT_NEAR(fitting_mass(m, 0.05, 1.0, false), 2.0 * w, 1e-12);
  EXPECT_NEAR(fitting_mass(m, 0.05, 2.0, false), w, 1e-12);
  EXPECT_NEAR(fitting_mass(m, 0.05, 1.0, true), 0.5 * w, 1e-12);
}

TEST(Soliton, CompetitorHasMassAndSupport) {
  const auto m = make_model(4.0);
  const auto mesh = build_mesh(fixtures::example(4), 0.01, 20.0);
  const auto e = mesh->graph().edge_index("e");
  const double mu = 1.5 * fitting_mass(m, 0.05, 2.0, false);
  const auto u = compact_competitor(m, mu, 0.05, mesh, e, false);
  EXPECT_NEAR(mass(u), mu, 1e-10 * mu);
  EXPECT_EQ(argmax(u).edge, e);
  EXPECT_NEAR(argmax(u).coordinate, 1.0, 0.011);
  EXPECT_EQ(u.at(e, 0), 0.0);
  EXPECT_LE(energy(u, 4.0).total, -(1.0 - 0.05) * m.theta * std::pow(mu, 3.0));
  EXPECT_THROW(compact_competitor(m, 0.5 * mu / 1.5, 0.05, mesh, e, false), Error);
}

}  // namespace
}  // namespace graphnls
