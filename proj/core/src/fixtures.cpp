#include "graphnls/fixtures.hpp"

#include <string>
#include <utility>
#include <vector>

#include "graphnls/error.hpp"

namespace graphnls::fixtures {

namespace {

Edge bounded(std::string id, std::string from, std::string to, double length) {
  return Edge{std::move(id), std::move(from), std::move(to), length};
}

Edge ray(std::string id, std::string from) { return Edge{std::move(id), std::move(from), std::nullopt, 0.0}; }

std::vector<Edge> example1_edges() {
  return {
      bounded("b1", "v1", "v2", 1.0),  bounded("b2", "v1", "v3", 1.0),  bounded("b3", "v2", "v3", 1.0),
      bounded("b4", "v2", "v2", 1.0),  bounded("b5", "v2", "v4", 1.0),  bounded("b6", "v4", "v5", 1.0),
      bounded("b7", "v4", "v5", 1.0),  bounded("b8", "v4", "v5", 1.0),  bounded("b9", "v4", "v6", 1.0),
      bounded("b10", "v4", "v6", 1.0), bounded("b11", "v5", "v6", 1.0), bounded("b12", "v6", "v7", 1.0),
      bounded("b13", "v5", "v7", 1.0), ray("h1", "v1"),                 ray("h2", "v3"),
      ray("h3", "v7"),                 ray("h4", "v5"),                 ray("h5", "v5"),
  };
}

}  // namespace

MetricGraph example(int n) {
  switch (n) {
    case 1:
      return MetricGraph("example1", {"v1", "v2", "v3", "v4", "v5", "v6", "v7"}, example1_edges());
    case 2: {
      auto edges = example1_edges();
      edges.push_back(bounded("f", "v3", "v8", 1.0));
      return MetricGraph("example2", {"v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"}, std::move(edges));
    }
    case 3:
      return MetricGraph("example3", {"v1", "v2"},
                         {bounded("e", "v2", "v2", 2.0), bounded("f", "v1", "v2", 1.0),
                          bounded("g", "v1", "v2", 1.0), ray("h1", "v1"), ray("h2", "v1")});
    case 4:
      return MetricGraph("example4", {"v1", "v2", "v3", "v4"},
                         {bounded("e", "v1", "v3", 2.0), bounded("f", "v1", "v2", 4.0),
                          bounded("g", "v2", "v4", 2.0), ray("h1", "v1"), ray("h2", "v2")});
    default:
      throw Error(ErrorKind::kInvalidArgument, "no built-in example " + std::to_string(n) + " (expected 1-4)");
  }
}

MetricGraph real_line() { return MetricGraph("real-line", {"o"}, {ray("left", "o"), ray("right", "o")}); }

MetricGraph halfline() { return MetricGraph("halfline", {"o"}, {ray("h", "o")}); }

MetricGraph line_with_edge(double length) {
  return MetricGraph("line", {"a", "b"}, {ray("left", "a"), bounded("e", "a", "b", length), ray("right", "b")});
}

MetricGraph star(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "star needs at least one halfline");
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i) edges.push_back(ray("h" + std::to_string(i), "o"));
  return MetricGraph("star" + std::to_string(n), {"o"}, std::move(edges));
}

MetricGraph dumbbell(double length) {
  return MetricGraph("dumbbell", {"a", "b"},
                     {bounded("e", "a", "b", length), ray("a1", "a"), ray("a2", "a"), ray("b1", "b"), ray("b2", "b")});
}

}  // namespace graphnls::fixtures
