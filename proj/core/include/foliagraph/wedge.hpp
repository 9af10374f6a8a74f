#pragma once

#include "foliagraph/grid.hpp"

namespace foliagraph {

struct WedgeResult {
  double max_abs = 0;
  ScalarGrid field;  // residual of w . curl w at interior unmasked nodes
};

// Frobenius integrability residual w1(d2w3-d3w2) + w2(d3w1-d1w3) + w3(d1w2-d2w1)
// with second-order central differences, falling back to one-sided first
// order next to the mask. Throws DimensionError for 2D input (every planar
// one-form satisfies the condition identically).
WedgeResult wedge_residual(const SampledOneForm& form);

}  // namespace foliagraph
