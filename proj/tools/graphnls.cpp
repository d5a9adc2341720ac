// graphnls: command-line front end for ground states and bound states of the
// focusing NLS energy on noncompact metric graphs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphnls/error.hpp"
#include "graphnls/evolve.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/io.hpp"
#include "graphnls/solve.hpp"
#include "graphnls/verify.hpp"

namespace {

using graphnls::Error;
using graphnls::ErrorKind;
using nlohmann::json;

constexpr int kUsageError = 1;
constexpr int kNumericalError = 2;

struct Common {
  std::string graph;
  int example = 0;
  std::string edge;
  double mass = 0.0;
  double p = 4.0;
  double h = 0.01;
  std::string trunc = "auto";
  double tol = 1e-8;
  int max_iter = 20000;
  std::uint64_t seed = 0;
  std::string step_rule = "adaptive-two-point";
  double epsilon = 0.05;
  int jobs = 1;
  std::string out;
  std::string csv;
};

void add_graph_options(CLI::App* cmd, Common& c) {
  auto* file = cmd->add_option("--graph", c.graph, "Graph document (JSON)");
  auto* builtin = cmd->add_option("--example", c.example, "Built-in example graph 1-4")->check(CLI::Range(1, 4));
  file->excludes(builtin);
}

void add_solver_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--p", c.p, "Nonlinearity exponent in (2, 6)")->capture_default_str();
  cmd->add_option("--h", c.h, "Mesh spacing")->capture_default_str();
  cmd->add_option("--trunc", c.trunc, "Halfline truncation length or 'auto'")->capture_default_str();
  cmd->add_option("--tol", c.tol, "Gradient tolerance")->capture_default_str();
  cmd->add_option("--max-iter", c.max_iter, "Maximum descent iterations")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for perturbations and random starts")->capture_default_str();
  cmd->add_option("--step-rule", c.step_rule, "fixed or adaptive-two-point")->capture_default_str();
  cmd->add_option("--epsilon", c.epsilon, "Competitor quality in (0, 1)")->capture_default_str();
}

void add_output_options(CLI::App* cmd, Common& c, bool csv) {
  cmd->add_option("--out", c.out, "Write the JSON document here instead of stdout");
  if (csv) cmd->add_option("--csv", c.csv, "Write plot data as CSV");
}

graphnls::MetricGraph load(const Common& c) {
  if (c.example) return graphnls::fixtures::example(c.example);
  if (c.graph.empty()) throw Error(ErrorKind::kInvalidArgument, "one of --graph or --example is required");
  return graphnls::load_graph_file(c.graph);
}

graphnls::SolveConfig config(const Common& c) {
  graphnls::SolveConfig cfg;
  cfg.tolerance = c.tol;
  cfg.max_iterations = c.max_iter;
  cfg.step_rule = graphnls::parse_step_rule(c.step_rule);
  cfg.h = c.h;
  if (c.trunc != "auto") {
    try {
      std::size_t used = 0;
      cfg.truncation = std::stod(c.trunc, &used);
      if (used != c.trunc.size()) throw std::invalid_argument(c.trunc);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidArgument, "--trunc expects a length or 'auto'");
    }
  }
  cfg.seed = c.seed;
  cfg.epsilon = c.epsilon;
  cfg.jobs = c.jobs;
  cfg.validate();
  return cfg;
}

json flags(const Common& c) {
  return json{{"graph", c.graph},   {"example", c.example}, {"edge", c.edge},   {"mass", c.mass},
              {"p", c.p},           {"h", c.h},             {"trunc", c.trunc}, {"tol", c.tol},
              {"max_iter", c.max_iter}, {"seed", c.seed},   {"step_rule", c.step_rule},
              {"epsilon", c.epsilon}, {"jobs", c.jobs}};
}

void emit(const std::string& path, const json& doc) {
  if (path.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

template <class Write>
void emit_csv(const std::string& path, Write write) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  write(out);
}

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

// A report document is either a bare report or {"report": ..., "manifest": ...}.
const json& report_node(const json& doc) { return doc.contains("report") ? doc.at("report") : doc; }

void summarize(const graphnls::SolveReport& r, std::ostream& out) {
  const auto& g = r.minimizer.mesh().graph();
  out << "status " << graphnls::to_string(r.status);
  if (r.edge) out << "  edge " << g.edge(*r.edge).id;
  out << "  energy " << r.energy.total << "  lambda " << r.lambda << "  iterations " << r.iterations << '\n';
  for (const auto& d : r.diagnostics) std::cerr << "note: " << d << '\n';
}

int status_code(const graphnls::SolveReport& r) {
  return r.status == graphnls::SolveStatus::kNotConverged ? kNumericalError : 0;
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json with_manifest(json body, const std::string& command, const json& config, const Timer& timer) {
  graphnls::RunManifest m;
  m.command = command;
  m.config = config;
  m.wall_time = timer.seconds();
  body["manifest"] = graphnls::to_json(m);
  return body;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidArgument, "--grid expects comma-separated masses");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states and bound states of the focusing NLS on noncompact metric graphs"};
  app.set_version_flag("--version", std::string(graphnls::kVersion));
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Common c;
  std::string path;
  std::string grid = "0.5,1,2,4,8";
  graphnls::StabilityOptions probe;
  bool snapshots = false;
  int example_n = 0;

  auto* validate = app.add_subcommand("validate", "Check a graph document and print its edge counts");
  validate->add_option("file", path, "Graph document")->required();

  auto* solve = app.add_subcommand("solve", "Minimize with the maximum localized on one edge");
  add_graph_options(solve, c);
  solve->add_option("--edge", c.edge, "Bounded edge id")->required();
  solve->add_option("--mass", c.mass, "Prescribed mass")->required();
  add_solver_options(solve, c);
  add_output_options(solve, c, true);

  auto* catalogue = app.add_subcommand("catalogue", "One localized bound state per bounded edge");
  add_graph_options(catalogue, c);
  catalogue->add_option("--mass", c.mass, "Prescribed mass")->required();
  add_solver_options(catalogue, c);
  catalogue->add_option("--jobs", c.jobs, "Parallel solves")->check(CLI::PositiveNumber);
  add_output_options(catalogue, c, true);

  auto* ground = app.add_subcommand("ground", "Search for the ground state");
  add_graph_options(ground, c);
  ground->add_option("--mass", c.mass, "Prescribed mass")->required();
  add_solver_options(ground, c);
  ground->add_option("--jobs", c.jobs, "Parallel descents")->check(CLI::PositiveNumber);
  add_output_options(ground, c, true);

  auto* scan = app.add_subcommand("scan", "Localization status over a mass grid");
  add_graph_options(scan, c);
  scan->add_option("--edge", c.edge, "Bounded edge id")->required();
  scan->add_option("--grid", grid, "Increasing comma-separated masses")->capture_default_str();
  add_solver_options(scan, c);
  scan->add_option("--jobs", c.jobs, "Parallel solves")->check(CLI::PositiveNumber);
  add_output_options(scan, c, true);

  auto* verify = app.add_subcommand("verify", "Certify a solve report");
  verify->add_option("report", path, "Report document")->required();
  add_output_options(verify, c, false);

  auto* evolve = app.add_subcommand("evolve", "Stability probe of a solve report");
  evolve->add_option("report", path, "Report document")->required();
  evolve->add_option("--epsilon", probe.epsilon, "Perturbation size")->capture_default_str();
  evolve->add_option("--T", probe.final_time, "Final time")->capture_default_str();
  evolve->add_option("--dt", probe.dt, "Time step")->capture_default_str();
  evolve->add_option("--seed", probe.seed, "Perturbation seed")->capture_default_str();
  evolve->add_option("--stride", probe.stride, "Steps between samples")->capture_default_str();
  evolve->add_flag("--snapshots", snapshots, "Store the sampled states in the output");
  add_output_options(evolve, c, true);

  auto* example = app.add_subcommand("example", "Print a built-in example graph");
  example->add_option("n", example_n, "Example number 1-4")->required()->check(CLI::Range(1, 4));
  add_output_options(example, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  std::ostringstream command;
  for (int i = 0; i < argc; ++i) command << (i ? " " : "") << argv[i];
  const Timer timer;

  try {
    if (*validate) {
      const auto g = graphnls::load_graph_file(path);
      const auto cls = graphnls::classify_edges(g);
      std::cout << cls.bounded << " bounded edges, " << cls.halflines << " halflines\n";
      for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto& edge = g.edge(e);
        std::cout << "  " << edge.id << ": "
                  << (edge.halfline() ? std::string("halfline") : std::string(graphnls::to_string(cls.edges[e].topology)))
                  << '\n';
      }
      const auto norm = graphnls::normalize(g);
      for (const auto& v : norm.retained_degree_two) std::cerr << "note: degree-two vertex '" << v << "' retained\n";
      return 0;
    }

    if (*example) {
      emit(c.out, graphnls::to_json(graphnls::fixtures::example(example_n)));
      return 0;
    }

    if (*solve) {
      const auto g = load(c);
      const auto cfg = config(c);
      const auto r = graphnls::minimize_on_edge(g, c.edge, c.mass, c.p, cfg);
      summarize(r, c.out.empty() ? std::cerr : std::cout);
      emit(c.out, with_manifest(json{{"report", graphnls::to_json(r)}}, command.str(), flags(c), timer));
      emit_csv(c.csv, [&](std::ostream& o) { graphnls::write_csv(o, r.minimizer); });
      return status_code(r);
    }

    if (*ground) {
      const auto g = load(c);
      const auto cfg = config(c);
      const auto r = graphnls::ground_state(g, c.mass, c.p, cfg);
      summarize(r, c.out.empty() ? std::cerr : std::cout);
      emit(c.out, with_manifest(json{{"report", graphnls::to_json(r)}}, command.str(), flags(c), timer));
      emit_csv(c.csv, [&](std::ostream& o) { graphnls::write_csv(o, r.minimizer); });
      return status_code(r);
    }

    if (*catalogue) {
      const auto g = load(c);
      const auto cfg = config(c);
      const auto reports = graphnls::bound_state_catalogue(g, c.mass, c.p, cfg);
      json entries = json::array();
      int code = 0;
      for (const auto& r : reports) {
        summarize(r, c.out.empty() ? std::cerr : std::cout);
        entries.push_back(graphnls::to_json(r));
        code = std::max(code, status_code(r));
      }
      emit(c.out, with_manifest(json{{"reports", entries}}, command.str(), flags(c), timer));
      emit_csv(c.csv, [&](std::ostream& o) {
        o << "localization_edge,edge,x,u\n";
        for (const auto& r : reports) {
          std::ostringstream rows;
          graphnls::write_csv(rows, r.minimizer);
          std::string line;
          std::istringstream in(rows.str());
          std::getline(in, line);
          while (std::getline(in, line)) o << g.edge(*r.edge).id << ',' << line << '\n';
        }
      });
      return code;
    }

    if (*scan) {
      const auto g = load(c);
      const auto cfg = config(c);
      const auto masses = parse_grid(grid);
      const auto s = graphnls::scan_mass_threshold(g, c.edge, c.p, masses, cfg);
      std::ostream& out = c.out.empty() ? std::cerr : std::cout;
      for (std::size_t i = 0; i < s.reports.size(); ++i) {
        out << "mu " << s.masses[i] << "  " << graphnls::to_string(s.reports[i].status) << "  energy "
            << s.reports[i].energy.total << '\n';
      }
      out << "threshold " << (s.threshold ? std::to_string(*s.threshold) : std::string("not found")) << '\n';
      json doc = with_manifest(json{{"scan", graphnls::to_json(s, g)}}, command.str(), flags(c), timer);
      doc["manifest"]["config"]["grid"] = masses;
      emit(c.out, doc);
      emit_csv(c.csv, [&](std::ostream& o) { graphnls::write_csv(o, s); });
      return 0;
    }

    if (*verify) {
      json doc = read_document(path);
      const auto r = graphnls::solve_report_from_json(report_node(doc));
      const auto v = graphnls::certify(r, graphnls::make_model(r.p));
      const json vj = graphnls::to_json(v);
      (doc.contains("report") ? doc["report"] : doc)["verify"] = vj;
      std::ostream& out = c.out.empty() ? std::cerr : std::cout;
      out << (v.passed() ? "all checks pass" : "some checks fail") << "  el " << v.el_residual << "  kirchhoff "
          << v.kirchhoff_residual << "  N " << v.measured_n << '\n';
      emit(c.out, doc);
      return 0;
    }

    if (*evolve) {
      json doc = read_document(path);
      const auto r = graphnls::solve_report_from_json(report_node(doc));
      const json config{{"epsilon", probe.epsilon}, {"T", probe.final_time}, {"dt", probe.dt},
                        {"seed", probe.seed},       {"stride", probe.stride}};
      const auto s = graphnls::stability_probe(r, probe);
      (doc.contains("report") ? doc["report"] : doc)["stability"] = graphnls::to_json(s);
      if (snapshots) {
        graphnls::EvolveOptions evo;
        evo.final_time = probe.final_time;
        evo.dt = probe.dt;
        evo.stride = probe.stride;
        evo.keep_snapshots = true;
        const auto traj = graphnls::evolve(graphnls::to_complex(r.minimizer), r.p, evo);
        doc["trajectory"] = graphnls::to_json(traj);
      }
      doc["evolve_manifest"] = graphnls::to_json(graphnls::RunManifest{command.str(), config, std::string(graphnls::kVersion), timer.seconds()});
      std::ostream& out = c.out.empty() ? std::cerr : std::cout;
      out << "max orbital distance " << s.max_distance << "  mass drift " << s.mass_drift << "  energy drift "
          << s.energy_drift << '\n';
      emit(c.out, doc);
      emit_csv(c.csv, [&](std::ostream& o) {
        o << "t,orbital_distance\n";
        for (std::size_t i = 0; i < s.times.size(); ++i) o << s.times[i] << ',' << s.orbital_distances[i] << '\n';
      });
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return graphnls::is_input_error(e) ? kUsageError : kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return 0;
}
