#pragma once

#include <set>
#include <tuple>

#include "foliagraph/trace.hpp"

namespace foliagraph {

struct Intercept {
  int transversal = 0;
  double param = 0;  // arclength along the transversal
  int seed = 0;
  friend bool operator<(const Intercept& a, const Intercept& b) {
    return std::tie(a.transversal, a.param, a.seed) < std::tie(b.transversal, b.param, b.seed);
  }
};

struct LeafClass {
  std::string id;
  std::vector<int> seeds;             // member seed indices
  std::vector<Intercept> intercepts;  // sorted
  int representative = -1;            // longest member trace (seed index)
  bool closed = false;
  bool touches_mask = false;
  bool touches_boundary = false;
};

struct ClassifyOptions {
  double sample_factor = 1.0;  // intercept sample spacing along transversals, in grid units
  double tube_factor = 0.5;    // merge tube, in grid units
  double angle_deg = 15.0;     // line-angle agreement for merging
  TraceOptions trace;
  int threads = 0;  // 0 = hardware concurrency
};

struct LeafField {
  std::vector<Vec2> seed_pos;
  std::vector<Vec2> seed_dir;             // leaf direction at the seed
  std::vector<Intercept> seed_intercept;  // where each seed sits
  std::vector<LeafTrace> traces;          // one per seed
  std::vector<LeafClass> classes;
  std::vector<int> class_of_seed;
};

// Seed a leaf trace at every intercept sample along every transversal and
// merge traces that revisit each other's seeds within the tube with aligned
// directions. Deterministic: classes ordered by smallest member seed.
LeafField classify_leaves(const TransversalNet& net, const SampledOneForm& form,
                          const ClassifyOptions& opts = {});

struct DetectOptions {
  double decrease_ratio = 0.7;  // required contraction of the normal-path integrals
  int approach = 3;             // members of the approaching family examined
};

// Unordered pairs of class ids that are one-sided limits of a common family
// on two transversals, confirmed by decreasing normal-path integrals.
std::vector<std::pair<std::string, std::string>> detect_inseparable(const LeafField& field,
                                                                    const TransversalNet& net,
                                                                    const SampledOneForm& form,
                                                                    const DetectOptions& opts = {});

// Classes whose every transversal parameter is a one-sided extreme of the
// reachable set. Classes touching the mask or the box boundary are exempt
// (grid artifacts, not intrinsic endpoints).
std::vector<std::string> detect_endpoints(const LeafField& field, const TransversalNet& net);

}  // namespace foliagraph
