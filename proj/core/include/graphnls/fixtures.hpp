#pragma once

#include "graphnls/graph.hpp"

namespace graphnls::fixtures {

// Built-in graphs. Edge lengths of the four catalogue examples are fixture
// choices (the topology is what matters):
//   example 1: 13 bounded edges of length 1, 5 halflines, no terminal edge.
//   example 2: example 1 plus the terminal edge "f" of length 1.
//   example 3: self-loop "e" of length 2 on top of two parallel edges
//              "f", "g" of length 1, two halflines.
//   example 4: halfline - "f" (length 4) - halfline, with terminal edges
//              "e" and "g" of length 2 hanging at the two vertices.

/// n in {1, 2, 3, 4}; throws kInvalidArgument otherwise.
MetricGraph example(int n);

/// Two halflines glued at one vertex: the real line.
MetricGraph real_line();
/// A single halfline: the positive halfline.
MetricGraph halfline();
/// halfline - "e" (bounded, given length) - halfline.
MetricGraph line_with_edge(double length);
/// n halflines glued at one vertex.
MetricGraph star(int n);
/// Bounded edge "e" whose endpoints each carry two halflines.
MetricGraph dumbbell(double length);

}  // namespace graphnls::fixtures
