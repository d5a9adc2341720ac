#include "graphnls/io.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

#include "graphnls/error.hpp"

namespace graphnls {

using nlohmann::json;

namespace {

template <class T, class Emit>
json function_json(const BasicGraphFunction<T>& u, Emit emit) {
  const Mesh& mesh = u.mesh();
  json doc;
  doc["h"] = mesh.requested_h();
  doc["truncation"] = mesh.truncation();
  json edges = json::array();
  for (const EdgeMesh& em : mesh.edges()) {
    json entry;
    entry["id"] = mesh.graph().edge(em.edge).id;
    entry["spacing"] = em.spacing;
    std::vector<double> xs;
    for (std::size_t k = 0; k < em.nodes(); ++k) xs.push_back(em.coordinate(k));
    entry["x"] = xs;
    emit(entry, em);
    edges.push_back(std::move(entry));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

// Finite numbers only; NaN or infinity become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_number(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::kParse, std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw Error(ErrorKind::kParse, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

json to_json(const GraphFunction& u) {
  return function_json(u, [&](json& entry, const EdgeMesh& em) {
    std::vector<double> vals;
    for (Index dof : em.dofs) vals.push_back(u.values()[dof]);
    entry["u"] = vals;
  });
}

json to_json(const ComplexGraphFunction& u) {
  return function_json(u, [&](json& entry, const EdgeMesh& em) {
    std::vector<double> re;
    std::vector<double> im;
    for (Index dof : em.dofs) {
      re.push_back(u.values()[dof].real());
      im.push_back(u.values()[dof].imag());
    }
    entry["re"] = re;
    entry["im"] = im;
  });
}

GraphFunction graph_function_from_json(const json& doc, const MetricGraph& graph) {
  try {
    const double h = doc.at("h").get<double>();
    const double truncation = doc.at("truncation").get<double>();
    auto mesh = build_mesh(graph, h, truncation);
    GraphFunction out(mesh);
    const json& edges = doc.at("edges");
    if (!edges.is_array() || edges.size() != graph.edges().size()) {
      throw Error(ErrorKind::kParse, "function document does not match the graph");
    }
    for (const json& entry : edges) {
      const std::size_t e = graph.edge_index(entry.at("id").get<std::string>());
      const auto vals = entry.at("u").get<std::vector<double>>();
      const EdgeMesh& em = mesh->edge(e);
      if (vals.size() != em.nodes()) throw Error(ErrorKind::kParse, "node count mismatch on edge '" + graph.edge(e).id + "'");
      for (std::size_t k = 0; k < vals.size(); ++k) out.values()[em.dofs[k]] = vals[k];
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("function document: ") + e.what());
  }
}

json to_json(const EnergyBreakdown& e) {
  return json{{"kinetic", e.kinetic}, {"potential", e.potential}, {"total", e.total}, {"p", e.p}};
}

json to_json(const SolveConfig& cfg) {
  json doc;
  doc["tolerance"] = cfg.tolerance;
  doc["max_iterations"] = cfg.max_iterations;
  doc["step_rule"] = std::string(to_string(cfg.step_rule));
  doc["fixed_step"] = cfg.fixed_step;
  doc["h"] = cfg.h;
  doc["truncation"] = cfg.truncation ? json(*cfg.truncation) : json("auto");
  doc["seed"] = cfg.seed;
  doc["epsilon"] = cfg.epsilon;
  doc["max_restarts"] = cfg.max_restarts;
  doc["random_starts"] = cfg.random_starts;
  doc["jobs"] = cfg.jobs;
  return doc;
}

SolveConfig solve_config_from_json(const json& doc) {
  try {
    SolveConfig cfg;
    cfg.tolerance = doc.at("tolerance").get<double>();
    cfg.max_iterations = doc.at("max_iterations").get<int>();
    cfg.step_rule = parse_step_rule(doc.at("step_rule").get<std::string>());
    cfg.fixed_step = doc.value("fixed_step", cfg.fixed_step);
    cfg.h = doc.at("h").get<double>();
    const json& t = doc.at("truncation");
    if (t.is_number()) cfg.truncation = t.get<double>();
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.epsilon = doc.value("epsilon", cfg.epsilon);
    cfg.max_restarts = doc.value("max_restarts", cfg.max_restarts);
    cfg.random_starts = doc.value("random_starts", cfg.random_starts);
    cfg.jobs = doc.value("jobs", cfg.jobs);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config document: ") + e.what());
  }
}

json to_json(const SolveReport& r) {
  const MetricGraph& graph = r.minimizer.mesh().graph();
  json doc;
  doc["status"] = std::string(to_string(r.status));
  doc["converged"] = r.converged;
  doc["iterations"] = r.iterations;
  doc["restarts"] = r.restarts;
  doc["energy"] = to_json(r.energy);
  doc["lambda"] = number(r.lambda);
  doc["mass"] = r.mass;
  doc["requested_mass"] = r.requested_mass;
  doc["p"] = r.p;
  doc["mass_loss"] = r.mass_loss;
  doc["migration"] = r.migration;
  doc["localization_margin"] = r.localization_margin;
  doc["el_residual"] = number(r.el_residual);
  doc["kirchhoff_residual"] = number(r.kirchhoff_residual);
  doc["gradient_norm"] = number(r.gradient_norm);
  doc["edge"] = r.edge ? json(graph.edge(*r.edge).id) : json(nullptr);
  doc["ground_state"] = r.ground_state;
  doc["competitor_fit"] = r.competitor_fit;
  doc["peak"] = json{{"edge", graph.edge(r.peak.edge).id}, {"coordinate", r.peak.coordinate}, {"value", r.peak.value}};
  doc["config"] = to_json(r.config);
  doc["diagnostics"] = r.diagnostics;
  doc["graph"] = to_json(graph);
  doc["minimizer"] = to_json(r.minimizer);
  return doc;
}

SolveReport solve_report_from_json(const json& doc) {
  try {
    const MetricGraph graph = load_graph(doc.at("graph"));
    SolveReport r;
    r.minimizer = graph_function_from_json(doc.at("minimizer"), graph);
    const MetricGraph& g = r.minimizer.mesh().graph();
    r.status = parse_status(doc.at("status").get<std::string>());
    r.converged = doc.at("converged").get<bool>();
    r.iterations = doc.value("iterations", 0);
    r.restarts = doc.value("restarts", 0);
    const json& e = doc.at("energy");
    r.energy = EnergyBreakdown{read_number(e, "kinetic"), read_number(e, "potential"), read_number(e, "total"),
                               read_number(e, "p")};
    r.lambda = read_number(doc, "lambda");
    r.mass = read_number(doc, "mass");
    r.requested_mass = read_number(doc, "requested_mass");
    r.p = read_number(doc, "p");
    r.mass_loss = read_number(doc, "mass_loss");
    r.migration = doc.value("migration", false);
    r.localization_margin = read_number(doc, "localization_margin");
    r.el_residual = read_number(doc, "el_residual");
    r.kirchhoff_residual = read_number(doc, "kirchhoff_residual");
    r.gradient_norm = read_number(doc, "gradient_norm");
    if (!doc.at("edge").is_null()) r.edge = g.edge_index(doc.at("edge").get<std::string>());
    r.ground_state = doc.value("ground_state", false);
    r.competitor_fit = doc.value("competitor_fit", true);
    r.peak = argmax(r.minimizer);
    r.config = solve_config_from_json(doc.at("config"));
    r.diagnostics = doc.value("diagnostics", std::vector<std::string>{});
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("report document: ") + e.what());
  }
}

json to_json(const VerificationReport& v) {
  json doc;
  doc["passed"] = v.passed();
  doc["el_residual"] = number(v.el_residual);
  doc["el_residual_max"] = number(v.el_residual_max);
  doc["kirchhoff_residual"] = number(v.kirchhoff_residual);
  doc["kirchhoff_stencil"] = number(v.kirchhoff_stencil);
  doc["localization_margin"] = v.localization_margin ? number(*v.localization_margin) : json(nullptr);
  doc["residuals_pass"] = v.residuals_pass;
  doc["positivity"] = v.positivity;
  doc["min_relative_value"] = v.min_relative_value;
  doc["lambda_positive"] = v.lambda_positive;
  doc["sandwich"] = v.sandwich ? json(*v.sandwich ? "pass" : "fail") : json("not-applicable");
  doc["line_level"] = v.line_level;
  doc["halfline_level"] = v.halfline_level;
  doc["ge3"] = json{{"pass", v.ge3}, {"measured_n", v.measured_n}, {"bound", number(v.ge3_bound)}};
  doc["gn"] = json{{"pass", v.gn}, {"ratio", number(v.gn_ratio)}, {"bound", number(v.gn_bound)}};
  doc["linf_ratio"] = number(v.linf_ratio);
  return doc;
}

json to_json(const ScanReport& scan, const MetricGraph& graph) {
  json doc;
  doc["masses"] = scan.masses;
  json entries = json::array();
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    const SolveReport& r = scan.reports[i];
    entries.push_back(json{{"mu", scan.masses[i]},
                           {"status", std::string(to_string(r.status))},
                           {"energy", r.energy.total},
                           {"lambda", number(r.lambda)},
                           {"localization_margin", r.localization_margin},
                           {"iterations", r.iterations},
                           {"competitor_fit", r.competitor_fit}});
  }
  doc["entries"] = std::move(entries);
  doc["threshold"] = scan.threshold ? json(*scan.threshold) : json("not found");
  doc["fitting_threshold"] = scan.fitting_threshold ? json(*scan.fitting_threshold) : json("not found");
  doc["monotonicity_violations"] = scan.monotonicity_violations;
  if (!scan.reports.empty() && scan.reports.front().edge) {
    doc["edge"] = graph.edge(*scan.reports.front().edge).id;
  }
  return doc;
}

json to_json(const StabilityReport& s) {
  return json{{"epsilon", s.epsilon},
              {"times", s.times},
              {"orbital_distances", s.orbital_distances},
              {"max_distance", s.max_distance},
              {"mass_drift", s.mass_drift},
              {"energy_drift", s.energy_drift},
              {"relative_energy_drift", s.relative_energy_drift}};
}

json to_json(const Trajectory& t) {
  json doc{{"times", t.times},
           {"masses", t.masses},
           {"energies", t.energies},
           {"mass_drift", t.mass_drift},
           {"energy_drift", t.energy_drift},
           {"steps", t.steps}};
  json snaps = json::array();
  for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
    snaps.push_back(json{{"t", t.times[i]}, {"state", to_json(t.snapshots[i])}});
  }
  doc["snapshots"] = std::move(snaps);
  return doc;
}

json to_json(const RunManifest& m) {
  return json{{"command", m.command}, {"config", m.config}, {"version", m.version}, {"wall_time", m.wall_time}};
}

void write_csv(std::ostream& out, const GraphFunction& u) {
  const Mesh& mesh = u.mesh();
  out << "edge,x,u\n" << std::setprecision(17);
  for (const EdgeMesh& em : mesh.edges()) {
    const std::string& id = mesh.graph().edge(em.edge).id;
    for (std::size_t k = 0; k < em.nodes(); ++k) {
      out << id << ',' << em.coordinate(k) << ',' << u.values()[em.dofs[k]] << '\n';
    }
  }
}

void write_csv(std::ostream& out, const ScanReport& scan) {
  out << "mu,status,energy,lambda,localization_margin\n" << std::setprecision(17);
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    const SolveReport& r = scan.reports[i];
    out << scan.masses[i] << ',' << to_string(r.status) << ',' << r.energy.total << ',' << r.lambda << ','
        << r.localization_margin << '\n';
  }
}

}  // namespace graphnls
