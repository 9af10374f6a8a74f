#pragma once

#include <optional>

#include "foliagraph/grid.hpp"

namespace foliagraph {

struct ClosingResult {
  bool feasible = false;
  ScalarGrid lambda;       // gauge: lambda = 0 at the first unmasked node
  double residual = 0.0;   // ||omega ^ d(lambda) - d(omega)||_2 / max(1, ||d(omega)||_2)
  int iterations = 0;
};

struct ClosingOptions {
  double tikhonov = 1e-8;
  double cg_tol = 1e-10;
  double infeasible_threshold = 1e-3;
  int max_iter_factor = 10;  // times the number of unknowns
};

// Least-squares solve of omega ^ d(lambda) = d(omega) over nodal lambda.
// Central differences at interior nodes, one-sided next to the mask and box
// boundary; normal equations solved by conjugate gradient with a small
// Tikhonov term. The reported lambda is shifted so the lexicographically
// first unmasked node reads exactly 0. Throws ConvergenceError if CG stalls.
ClosingResult closing_multiplier(const SampledOneForm& form, const ClosingOptions& opts = {});

}  // namespace foliagraph
