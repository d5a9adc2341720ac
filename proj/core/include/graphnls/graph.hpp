#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace graphnls {

/// One edge of a metric graph. A bounded edge is the interval [0, length]
/// with x = 0 at `from` and x = length at `to`. A halfline is [0, inf)
/// attached to the graph at `from` (x = 0) and has no `to`.
struct Edge {
  std::string id;
  std::string from;
  std::optional<std::string> to;
  double length = 0.0;

  bool halfline() const noexcept { return !to.has_value(); }
  bool self_loop() const noexcept { return to.has_value() && *to == from; }
};

/// A noncompact metric graph: connected, at least one halfline, positive
/// bounded lengths. Self-loops and parallel edges are allowed. Immutable
/// once constructed; the constructor validates every invariant.
class MetricGraph {
 public:
  MetricGraph(std::string name, std::vector<std::string> vertices, std::vector<Edge> edges);

  const std::string& name() const noexcept { return name_; }
  std::span<const std::string> vertices() const noexcept { return vertices_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;
  /// Throws ErrorKind::kInvalidArgument ("unknown edge ...") when absent.
  std::size_t edge_index(std::string_view id) const;

  std::size_t from_vertex(std::size_t e) const { return ends_.at(e).first; }
  /// Equal to from_vertex for self-loops; unspecified for halflines.
  std::size_t to_vertex(std::size_t e) const { return ends_.at(e).second; }

  /// Number of edge ends at v; a self-loop counts twice.
  int degree(std::size_t v) const { return degrees_.at(v); }
  /// Edges incident at v, in input order, each listed once.
  std::vector<std::size_t> incident_edges(std::size_t v) const;

  std::size_t bounded_count() const noexcept;
  std::size_t halfline_count() const noexcept;
  double total_bounded_length() const noexcept;

 private:
  std::string name_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::pair<std::size_t, std::size_t>> ends_;
  std::vector<int> degrees_;
};

/// Parses the graph-description document:
///   {"name": "...", "vertices": ["v1", ...],
///    "edges": [{"id": "e1", "from": "v1", "to": "v2", "length": 2.0},
///              {"id": "h1", "from": "v2", "halfline": true}]}
MetricGraph load_graph(std::string_view document);
MetricGraph load_graph(const nlohmann::json& document);
MetricGraph load_graph_file(const std::filesystem::path& path);

nlohmann::json to_json(const MetricGraph& graph);

struct NormalizeResult {
  MetricGraph graph;
  /// Degree-two vertices that could not be eliminated (on a pure cycle, or
  /// joining a halfline).
  std::vector<std::string> retained_degree_two;
};

/// Melts every pair of distinct bounded edges meeting at a degree-two vertex
/// into one edge whose length is the sum. Merged edges take the position of
/// the earlier edge and the id "a+b".
NormalizeResult normalize(const MetricGraph& graph);

enum class EdgeTopology { kInternal, kTerminal, kSelfLoop };

struct EdgeClass {
  bool halfline = false;
  EdgeTopology topology = EdgeTopology::kInternal;
};

struct Classification {
  std::vector<EdgeClass> edges;
  /// Length of the shortest bounded edge; empty when every edge is a halfline.
  std::optional<double> shortest_bounded;
  std::size_t halflines = 0;
  std::size_t bounded = 0;
};

Classification classify_edges(const MetricGraph& graph);

/// For a terminal edge, the degree-one endpoint (the free tip).
std::optional<std::size_t> terminal_tip(const MetricGraph& graph, std::size_t e);

std::string_view to_string(EdgeTopology t);

}  // namespace graphnls
