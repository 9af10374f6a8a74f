#pragma once

#include <string>

#include "foliagraph/strip.hpp"

namespace foliagraph {

// SVG 1.1 diagram: strips as rectangles in sorted id order, slot ticks,
// identification arcs labeled by micro-edge id, flips marked.
std::string render_svg(const StripComplex& complex);

}  // namespace foliagraph
