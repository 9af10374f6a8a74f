#pragma once

#include "foliagraph/config.hpp"

namespace foliagraph {

// Plain undirected multigraph with labeled vertices and edges.
struct Multigraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> vertex_labels;
  std::vector<std::string> edge_labels;
};

// First Betti number |E| - |V| + #components.
int betti1(const Multigraph& g);

// The main graph: every vertex of the macrograph replaced by its micrograph.
// Vertices are (vertex, incident edge) pairs plus one vertex per open end;
// edges are all micro-edges plus all macro-edges.
Multigraph build_main_graph(const GraphicalConfiguration& config);

// The macrograph as a plain multigraph (open ends become fresh leaves) and a
// single micrograph; both feed betti1 for the additivity identity.
Multigraph macrograph(const GraphicalConfiguration& config);
Multigraph micrograph_of(const GraphicalConfiguration& config, const std::string& vertex_id);

}  // namespace foliagraph
