#include <cmath>

#include <gtest/gtest.h>

#include "graphnls/error.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/mesh.hpp"

namespace graphnls {
namespace {

TEST(Mesh, NodeCounts) {
  const auto m = build_mesh(fixtures::line_with_edge(1.0), 0.25, 40.0);
  const auto& g = m->graph();
  EXPECT_EQ(m->edge(g.edge_index("e")).nodes(), 5u);
  EXPECT_DOUBLE_EQ(m->edge(g.edge_index("e")).spacing, 0.25);
  EXPECT_EQ(m->edge(g.edge_index("left")).nodes(), 161u);
  EXPECT_EQ(m->dofs(), 5 + 2 * 161 - 2);

  const auto line = build_mesh(fixtures::real_line(), 0.1, 40.0);
  EXPECT_EQ(line->edge(0).nodes(), 401u);
  EXPECT_EQ(line->dofs(), 801);
}

TEST(Mesh, SpacingDividesEdge) {
  const auto m = build_mesh(fixtures::dumbbell(0.3), 0.04, 20.0);
  const auto& e = m->edge(0);
  EXPECT_EQ(e.nodes(), 9u);
  EXPECT_NEAR(e.spacing * static_cast<double>(e.elements()), 0.3, 1e-14);
  EXPECT_LE(e.spacing, 0.04);
  EXPECT_LE(m->min_spacing(), 0.04);
}

TEST(Mesh, SharedVertexDofs) {
  const auto m = build_mesh(fixtures::example(3), 0.1, 20.0);
  const auto& g = m->graph();
  const auto v1 = *g.find_vertex("v1");
  const auto v2 = *g.find_vertex("v2");
  const auto& e = m->edge(g.edge_index("e"));
  EXPECT_EQ(e.dofs.front(), m->vertex_dof(v2));
  EXPECT_EQ(e.dofs.back(), m->vertex_dof(v2));
  EXPECT_EQ(m->edge(g.edge_index("f")).dofs.front(), m->vertex_dof(v1));
  EXPECT_EQ(m->edge(g.edge_index("f")).dofs.back(), m->vertex_dof(v2));
  EXPECT_EQ(m->edge(g.edge_index("h1")).dofs.front(), m->vertex_dof(v1));
  EXPECT_TRUE(m->dirichlet(m->edge(g.edge_index("h1")).dofs.back()));
  EXPECT_FALSE(m->dirichlet(m->vertex_dof(v1)));
  EXPECT_EQ(*m->dof_vertex(m->vertex_dof(v2)), v2);
  EXPECT_FALSE(m->dof_vertex(e.dofs[3]));
}

TEST(Mesh, RejectsCoarseSpacing) {
  EXPECT_THROW(build_mesh(fixtures::dumbbell(0.3), 0.15, 20.0), Error);
  EXPECT_THROW(build_mesh(fixtures::dumbbell(0.3), 0.1, 0.5), Error);
  EXPECT_THROW(build_mesh(fixtures::real_line(), -1.0, 20.0), Error);
  EXPECT_NO_THROW(build_mesh(fixtures::dumbbell(0.3), 0.1, 20.0));
}

TEST(Mesh, AutoTruncationGrowsForSmallMass) {
  const auto big = build_mesh(fixtures::real_line(), 0.1, AutoTruncation{10.0, 4.0});
  const auto small = build_mesh(fixtures::real_line(), 0.1, AutoTruncation{0.1, 4.0});
  EXPECT_GE(big->truncation(), 20.0);
  // lambda = mu^2 / 16 for p = 4, so 8 / sqrt(lambda) = 32 / mu.
  EXPECT_NEAR(small->truncation(), 320.0, 0.1);
}

TEST(Mesh, MatricesIntegrateConstantsAndLinears) {
  const auto m = build_mesh(fixtures::example(4), 0.1, 20.0);
  const Eigen::SparseMatrix<double> mass = mass_matrix(*m);
  const Eigen::SparseMatrix<double> stiff = stiffness_matrix(*m);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m->dofs());
  const double measure = 2.0 + 4.0 + 2.0 + 2.0 * 20.0;
  EXPECT_NEAR(one.dot(mass * one), measure, 1e-10);
  EXPECT_NEAR((stiff * one).norm(), 0.0, 1e-10);
  EXPECT_NEAR(lumped_mass(*m).sum(), measure, 1e-10);

  // u = x on edge f (from v1), continued by one-element ramps down to zero
  // on the other edges at both ends of f. On f: int u^2 = 64 / 3, int u'^2 = 4.
  const auto f = m->graph().edge_index("f");
  Eigen::VectorXd only_f = Eigen::VectorXd::Zero(m->dofs());
  for (std::size_t k = 0; k < m->edge(f).nodes(); ++k) only_f[m->edge(f).dofs[k]] = m->edge(f).coordinate(k);
  double other_mass = 0.0;
  double other_grad = 0.0;
  for (const auto& em : m->edges()) {
    if (em.edge == f) continue;
    for (const Index dof : {em.dofs.front(), em.dofs.back()}) {
      const double value = only_f[dof];
      if (value == 0.0 || (em.halfline && dof == em.dofs.back())) continue;
      other_mass += value * value * em.spacing / 3.0;
      other_grad += value * value / em.spacing;
    }
  }
  EXPECT_NEAR(only_f.dot(mass * only_f), 64.0 / 3.0 + other_mass, 1e-10);
  EXPECT_NEAR(only_f.dot(stiff * only_f), 4.0 + other_grad, 1e-10);
}

TEST(Mesh, InterpolateAndArgmax) {
  const auto m = build_mesh(fixtures::example(4), 0.05, 20.0);
  const auto e = m->graph().edge_index("e");
  Placement pl{e, 0.5, 1.5, [](double x) { return 1.0 - std::abs(x - 1.0) * 2.0; }};
  const auto u = interpolate(m, std::span<const Placement>(&pl, 1));
  const auto peak = argmax(u);
  EXPECT_EQ(peak.edge, e);
  EXPECT_NEAR(peak.coordinate, 1.0, 1e-12);
  EXPECT_NEAR(peak.value, 1.0, 1e-12);
  EXPECT_EQ(u.at(e, 0), 0.0);
  EXPECT_THROW(argmax(GraphFunction(m)), Error);
}

TEST(Mesh, ArgmaxTieBreak) {
  const auto m = build_mesh(fixtures::example(4), 0.5, 20.0);
  GraphFunction u(m);
  const auto g_edge = m->graph().edge_index("g");
  const auto e_edge = m->graph().edge_index("e");
  u.values()[m->edge(g_edge).dofs[1]] = 2.0;
  u.values()[m->edge(e_edge).dofs[2]] = 2.0;
  u.values()[m->edge(e_edge).dofs[1]] = 2.0;
  const auto peak = argmax(u);
  EXPECT_EQ(peak.edge, e_edge);
  EXPECT_DOUBLE_EQ(peak.coordinate, 0.5);
}

}  // namespace
}  // namespace graphnls
