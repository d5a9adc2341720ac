#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GRAPHNLS_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("graphnls_cli_" + name)).string();
}

nlohmann::json read(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

std::string data(const std::string& name) { return std::string(GRAPHNLS_DATA) + "/" + name; }

TEST(Cli, ValidateExampleOne) {
  const auto r = run("validate " + data("example1.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "13 bounded edges, 5 halflines");
}

TEST(Cli, ExampleMatchesDataFile) {
  for (int n = 1; n <= 4; ++n) {
    const auto r = run("example " + std::to_string(n));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out), read(data("example" + std::to_string(n) + ".json")));
  }
}

TEST(Cli, SolveVerifyEvolve) {
  const auto report = temp("report.json");
  const auto csv = temp("report.csv");
  auto r = run("solve --graph " + data("example3.json") + " --edge e --mass 10 --h 0.02 --out " + report +
               " --csv " + csv);
  ASSERT_EQ(r.code, 0);
  auto doc = read(report);
  EXPECT_EQ(doc.at("report").at("status"), "interior");
  EXPECT_EQ(doc.at("manifest").at("version"), "1.0.0");
  EXPECT_TRUE(doc.at("manifest").contains("wall_time"));
  EXPECT_TRUE(std::filesystem::file_size(csv) > 100);

  const auto verified = temp("verified.json");
  r = run("verify " + report + " --out " + verified);
  ASSERT_EQ(r.code, 0);
  doc = read(verified);
  EXPECT_TRUE(doc.at("report").at("verify").at("residuals_pass").get<bool>());

  const auto evolved = temp("evolved.json");
  r = run("evolve " + report + " --T 0.2 --dt 0.01 --stride 5 --epsilon 0.01 --out " + evolved);
  ASSERT_EQ(r.code, 0);
  doc = read(evolved);
  EXPECT_LT(doc.at("report").at("stability").at("max_distance").get<double>(), 0.1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("solve --example 3 --edge zz --mass 10").code, 1);
  EXPECT_EQ(run("solve --example 3 --edge h1 --mass 10").code, 1);
  EXPECT_EQ(run("solve --example 3 --edge e --mass 10 --p 7").code, 1);
  EXPECT_EQ(run("solve --example 3 --edge e").code, 1);
  EXPECT_EQ(run("validate /nonexistent.json").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("solve --example 3 --edge e --mass 10 --h 0.05 --max-iter 2").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ScanWritesThreshold) {
  const auto out = temp("scan.json");
  const auto r = run("scan --graph " + data("line_with_edge.json") + " --edge e --grid 4,8 --h 0.02 --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto doc = read(out);
  EXPECT_EQ(doc.at("scan").at("entries").size(), 2u);
  EXPECT_EQ(doc.at("manifest").at("config").at("grid").size(), 2u);
  EXPECT_EQ(run("scan --example 4 --edge e --grid 2,x").code, 1);
}

}  // namespace
