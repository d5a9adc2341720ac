#include <sstream>

#include <gtest/gtest.h>

#include "graphnls/error.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/functional.hpp"
#include "graphnls/io.hpp"
#include "graphnls/verify.hpp"

namespace graphnls {
namespace {

SolveReport sample_report() {
  SolveConfig cfg;
  cfg.h = 0.02;
  cfg.seed = 5;
  cfg.truncation = 25.0;
  return minimize_on_edge(fixtures::example(4), "e", 10.0, 4.0, cfg);
}

TEST(Io, GraphFunctionRoundTrip) {
  const auto mesh = build_mesh(fixtures::example(3), 0.1, 20.0);
  const auto u = sample(mesh, [](std::size_t e, double x) { return static_cast<double>(e) + 0.1 * x; });
  const auto doc = to_json(u);
  const auto back = graph_function_from_json(doc, mesh->graph());
  EXPECT_EQ((back.values() - u.values()).norm(), 0.0);
  EXPECT_EQ(back.mesh().dofs(), mesh->dofs());
}

TEST(Io, ComplexFunctionHasParts) {
  const auto mesh = build_mesh(fixtures::halfline(), 0.1, 1.0);
  auto z = to_complex(sample(mesh, [](std::size_t, double x) { return 1.0 - x; }));
  z.values() *= std::complex<double>(0.0, 1.0);
  const auto doc = to_json(z);
  ASSERT_TRUE(doc.at("edges").at(0).contains("re"));
  EXPECT_DOUBLE_EQ(doc.at("edges").at(0).at("im").at(0).get<double>(), 1.0);
}

TEST(Io, ConfigRoundTrip) {
  SolveConfig cfg;
  cfg.tolerance = 1e-7;
  cfg.max_iterations = 123;
  cfg.step_rule = StepRule::kFixed;
  cfg.seed = 77;
  cfg.truncation = 31.0;
  const auto back = solve_config_from_json(to_json(cfg));
  EXPECT_EQ(back.tolerance, cfg.tolerance);
  EXPECT_EQ(back.max_iterations, 123);
  EXPECT_EQ(back.step_rule, StepRule::kFixed);
  EXPECT_EQ(back.seed, 77u);
  ASSERT_TRUE(back.truncation);
  EXPECT_EQ(*back.truncation, 31.0);
  const auto automatic = to_json(SolveConfig{});
  EXPECT_EQ(automatic.at("truncation"), "auto");
  EXPECT_FALSE(solve_config_from_json(automatic).truncation);
}

TEST(Io, ReportRoundTrip) {
  const auto r = sample_report();
  const auto doc = to_json(r);
  EXPECT_EQ(doc.at("status"), "interior");
  EXPECT_EQ(doc.at("edge"), "e");
  const auto back = solve_report_from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.status, r.status);
  EXPECT_EQ(back.energy.total, r.energy.total);
  EXPECT_EQ(back.lambda, r.lambda);
  EXPECT_EQ(back.p, r.p);
  EXPECT_EQ(back.iterations, r.iterations);
  ASSERT_TRUE(back.edge);
  EXPECT_EQ(*back.edge, *r.edge);
  EXPECT_EQ((back.minimizer.values() - r.minimizer.values()).norm(), 0.0);
  EXPECT_EQ(back.minimizer.mesh().truncation(), r.minimizer.mesh().truncation());
  // The reloaded state certifies the same way.
  const auto v1 = certify(r, make_model(4.0));
  const auto v2 = certify(back, make_model(4.0));
  EXPECT_EQ(v1.el_residual, v2.el_residual);
  EXPECT_EQ(v1.passed(), v2.passed());
}

TEST(Io, MalformedReportIsParseError) {
  try {
    solve_report_from_json(nlohmann::json{{"status", "interior"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(is_input_error(e));
  }
}

TEST(Io, Csv) {
  const auto mesh = build_mesh(fixtures::halfline(), 0.25, 2.5);
  const auto u = sample(mesh, [](std::size_t, double x) { return x; });
  std::ostringstream out;
  write_csv(out, u);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "edge,x,u");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 11);
}

TEST(Io, ManifestAndScan) {
  RunManifest m;
  m.command = "graphnls solve";
  m.config = {{"h", 0.01}};
  const auto doc = to_json(m);
  EXPECT_EQ(doc.at("version"), kVersion);
  EXPECT_EQ(doc.at("command"), "graphnls solve");

  ScanReport s;
  s.masses = {1.0};
  s.reports = {sample_report()};
  const auto sj = to_json(s, fixtures::example(4));
  EXPECT_EQ(sj.at("threshold"), "not found");
  std::ostringstream csv;
  write_csv(csv, s);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "mu,status,energy,lambda,localization_margin");
}

}  // namespace
}  // namespace graphnls
