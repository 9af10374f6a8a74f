#pragma once

#include "foliagraph/config.hpp"

namespace foliagraph {

// A foliated surface presented as one rectangular strip per macro-edge with
// boundary slots glued pairwise. The strip of edge L carries the leaf
// coordinate x in [0,1]; "top" is the boundary at the orientation's tail,
// "bottom" at its head. Slot a of k occupies the open subinterval
// ((a-1)/k, a/k) of that boundary.
struct SlotRef {
  std::string edge;
  std::string side;  // "top" | "bottom"
  int slot = 1;      // 1-based
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

struct Identification {
  SlotRef a, b;
  bool flip = false;       // glued strips disagree on the transversal direction
  std::string micro;       // micro-edge realized by this gluing
};

struct StripComplex {
  struct Strip {
    int k = 1;  // top slots
    int l = 1;  // bottom slots
  };
  std::map<std::string, Strip> strips;  // macro-edge id -> slot counts
  std::vector<Identification> identifications;
};

// Reverse construction: realize an endpoint-free configuration as a strip
// complex carrying the closed local form sin(2*pi*x) dx. Throws
// EndpointError when an endpoint vertex is present.
StripComplex synthesize(const GraphicalConfiguration& config, const Orientation& orientation);

// Coefficient of the local closed one-form at leaf coordinate x.
double local_form(double x);

// Read the configuration back off the glued surface. Valid complexes whose
// gluing pattern came from a configuration with connected micrographs round
// trip up to isomorphism.
GraphicalConfiguration extract_configuration(const StripComplex& complex);

std::string strip_complex_to_json(const StripComplex& complex);
StripComplex strip_complex_from_json(const std::string& text);

}  // namespace foliagraph
