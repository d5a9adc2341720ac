#include "graphnls/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "graphnls/error.hpp"

namespace graphnls {

namespace {

Error invalid(const std::string& what) { return Error(ErrorKind::kInvalidGraph, what); }

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

MetricGraph::MetricGraph(std::string name, std::vector<std::string> vertices, std::vector<Edge> edges)
    : name_(std::move(name)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!index.emplace(vertices_[v], v).second) throw invalid("duplicate vertex '" + vertices_[v] + "'");
  }
  if (edges_.empty()) throw invalid("graph has no edges");

  std::unordered_set<std::string> edge_ids;
  auto lookup = [&](const std::string& id, const std::string& edge) {
    auto it = index.find(id);
    if (it == index.end()) throw invalid("edge '" + edge + "' references unknown vertex '" + id + "'");
    return it->second;
  };

  degrees_.assign(vertices_.size(), 0);
  bool has_halfline = false;
  for (const Edge& e : edges_) {
    if (!edge_ids.insert(e.id).second) throw invalid("duplicate edge '" + e.id + "'");
    const std::size_t a = lookup(e.from, e.id);
    if (e.halfline()) {
      has_halfline = true;
      ends_.emplace_back(a, a);
      degrees_[a] += 1;
      continue;
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw invalid("nonpositive length on edge '" + e.id + "'");
    }
    const std::size_t b = lookup(*e.to, e.id);
    ends_.emplace_back(a, b);
    degrees_[a] += 1;
    degrees_[b] += 1;
  }
  if (!has_halfline) throw invalid("compact graph: no halfline");

  DisjointSets sets(vertices_.size());
  for (const auto& [a, b] : ends_) sets.unite(a, b);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (sets.find(v) != sets.find(0)) throw invalid("disconnected graph: vertex '" + vertices_[v] + "'");
  }
}

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view id) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> MetricGraph::find_edge(std::string_view id) const {
  auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.id == id; });
  if (it == edges_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t MetricGraph::edge_index(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw Error(ErrorKind::kInvalidArgument, "unknown edge '" + std::string(id) + "'");
}

std::vector<std::size_t> MetricGraph::incident_edges(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [a, b] = ends_[e];
    if (a == v || (!edges_[e].halfline() && b == v)) out.push_back(e);
  }
  return out;
}

std::size_t MetricGraph::bounded_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return !e.halfline(); }));
}

std::size_t MetricGraph::halfline_count() const noexcept { return edges_.size() - bounded_count(); }

double MetricGraph::total_bounded_length() const noexcept {
  double total = 0.0;
  for (const Edge& e : edges_) {
    if (!e.halfline()) total += e.length;
  }
  return total;
}

MetricGraph load_graph(const nlohmann::json& doc) {
  auto parse_error = [](const std::string& what) { return Error(ErrorKind::kParse, what); };
  if (!doc.is_object()) throw parse_error("graph document must be an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw parse_error("missing 'vertices' array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw parse_error("missing 'edges' array");

  std::string name = doc.value("name", std::string{});
  std::vector<std::string> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string()) throw parse_error("vertex identifiers must be strings");
    vertices.push_back(v.get<std::string>());
  }

  std::vector<Edge> edges;
  for (const auto& item : doc["edges"]) {
    if (!item.is_object()) throw parse_error("edge entries must be objects");
    if (!item.contains("id") || !item["id"].is_string()) throw parse_error("edge without string 'id'");
    Edge e;
    e.id = item["id"].get<std::string>();
    if (!item.contains("from") || !item["from"].is_string()) throw parse_error("edge '" + e.id + "' without 'from'");
    e.from = item["from"].get<std::string>();
    const bool halfline = item.value("halfline", false);
    if (halfline) {
      if (item.contains("to")) throw parse_error("halfline '" + e.id + "' must not carry 'to'");
      if (item.contains("length")) throw parse_error("halfline '" + e.id + "' must not carry 'length'");
    } else {
      if (!item.contains("to") || !item["to"].is_string()) throw parse_error("bounded edge '" + e.id + "' without 'to'");
      if (!item.contains("length") || !item["length"].is_number()) {
        throw parse_error("bounded edge '" + e.id + "' without numeric 'length'");
      }
      e.to = item["to"].get<std::string>();
      e.length = item["length"].get<double>();
    }
    edges.push_back(std::move(e));
  }
  return MetricGraph(std::move(name), std::move(vertices), std::move(edges));
}

MetricGraph load_graph(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("graph document: ") + e.what());
  }
  return load_graph(doc);
}

MetricGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open graph file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_graph(std::string_view(buffer.str()));
}

nlohmann::json to_json(const MetricGraph& graph) {
  nlohmann::json doc;
  doc["name"] = graph.name();
  doc["vertices"] = std::vector<std::string>(graph.vertices().begin(), graph.vertices().end());
  auto edges = nlohmann::json::array();
  for (const Edge& e : graph.edges()) {
    nlohmann::json item;
    item["id"] = e.id;
    item["from"] = e.from;
    if (e.halfline()) {
      item["halfline"] = true;
    } else {
      item["to"] = *e.to;
      item["length"] = e.length;
    }
    edges.push_back(std::move(item));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

NormalizeResult normalize(const MetricGraph& graph) {
  std::vector<std::string> vertices(graph.vertices().begin(), graph.vertices().end());
  std::vector<Edge> edges(graph.edges().begin(), graph.edges().end());

  auto degree_and_incidence = [&](const std::string& v) {
    int degree = 0;
    std::vector<std::size_t> incident;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const bool at_from = edges[e].from == v;
      const bool at_to = edges[e].to && *edges[e].to == v;
      degree += static_cast<int>(at_from) + static_cast<int>(at_to);
      if (at_from || at_to) incident.push_back(e);
    }
    return std::make_pair(degree, incident);
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t vi = 0; vi < vertices.size(); ++vi) {
      const std::string v = vertices[vi];
      auto [degree, incident] = degree_and_incidence(v);
      if (degree != 2 || incident.size() != 2) continue;
      const std::size_t a = incident[0];
      const std::size_t b = incident[1];
      if (edges[a].halfline() || edges[b].halfline()) continue;

      // Orient a as (far_a -> v) and b as (v -> far_b).
      const std::string far_a = edges[a].from == v ? *edges[a].to : edges[a].from;
      const std::string far_b = edges[b].from == v ? *edges[b].to : edges[b].from;
      Edge merged;
      merged.id = edges[a].id + "+" + edges[b].id;
      merged.from = far_a;
      merged.to = far_b;
      merged.length = edges[a].length + edges[b].length;
      edges[a] = std::move(merged);
      edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(b));
      vertices.erase(vertices.begin() + static_cast<std::ptrdiff_t>(vi));
      changed = true;
      break;
    }
  }

  std::vector<std::string> retained;
  for (const std::string& v : vertices) {
    if (degree_and_incidence(v).first == 2) retained.push_back(v);
  }
  return NormalizeResult{MetricGraph(graph.name(), std::move(vertices), std::move(edges)), std::move(retained)};
}

Classification classify_edges(const MetricGraph& graph) {
  Classification out;
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const Edge& edge = graph.edge(e);
    EdgeClass c;
    c.halfline = edge.halfline();
    if (edge.halfline()) {
      ++out.halflines;
    } else {
      ++out.bounded;
      if (edge.self_loop()) {
        c.topology = EdgeTopology::kSelfLoop;
      } else if (graph.degree(graph.from_vertex(e)) == 1 || graph.degree(graph.to_vertex(e)) == 1) {
        c.topology = EdgeTopology::kTerminal;
      }
      out.shortest_bounded = std::min(out.shortest_bounded.value_or(edge.length), edge.length);
    }
    out.edges.push_back(c);
  }
  return out;
}

std::optional<std::size_t> terminal_tip(const MetricGraph& graph, std::size_t e) {
  const Edge& edge = graph.edge(e);
  if (edge.halfline() || edge.self_loop()) return std::nullopt;
  if (graph.degree(graph.from_vertex(e)) == 1) return graph.from_vertex(e);
  if (graph.degree(graph.to_vertex(e)) == 1) return graph.to_vertex(e);
  return std::nullopt;
}

std::string_view to_string(EdgeTopology t) {
  switch (t) {
    case EdgeTopology::kInternal:
      return "internal";
    case EdgeTopology::kTerminal:
      return "terminal";
    case EdgeTopology::kSelfLoop:
      return "self-loop";
  }
  return "internal";
}

}  // namespace graphnls
