#pragma once

#include "foliagraph/classify.hpp"
#include "foliagraph/config.hpp"

namespace foliagraph {

struct ChartEntry {
  std::string class_id;
  double t = 0;  // strictly monotone chart parameter in (0,1)
};

struct LeafSpaceGraph {
  GraphicalConfiguration config;
  std::map<std::string, std::vector<ChartEntry>> charts;  // edge id -> ordered entries
  std::map<std::string, std::string> vertex_of_class;     // flagged class id -> vertex id
  std::map<std::string, std::string> edge_of_class;       // regular class id -> edge id
  // edge id -> chart frame: transversal index and the run's param window
  struct ChartFrame {
    int transversal = -1;
    double lo = 0, hi = 0;
  };
  std::map<std::string, ChartFrame> frames;
};

struct BuildOptions {
  double condense_factor = 6.0;  // flagged classes within this many grid units
                                 // on one transversal act as one branching unit
};

// Assemble the graphical configuration: vertices from the transitive closure
// of inseparable pairs plus endpoint classes, macro-edges from maximal runs
// of regular classes, micro-edges from branching units with their two
// adjacent edges. Throws AmbiguityError when a branching unit does not see
// exactly two edges (under-resolved input).
LeafSpaceGraph build_configuration(const LeafField& field, const TransversalNet& net,
                                   const SampledOneForm& form,
                                   const std::vector<std::pair<std::string, std::string>>& pairs,
                                   const std::vector<std::string>& endpoints,
                                   const BuildOptions& opts = {});

// True when the second component is bounded away from zero and |g/h| <= C:
// every leaf is then a graph over the first axis and the leaf space is a
// line, so the configuration is a single open edge and tracing may be
// skipped. Requires an unmasked rectangle.
bool cylinder_fastpath(const SampledOneForm& form, double ratio_cap = 1e3);

// The configuration the fast path asserts.
GraphicalConfiguration single_edge_configuration();

}  // namespace foliagraph
