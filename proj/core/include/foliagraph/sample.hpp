#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foliagraph/expr.hpp"
#include "foliagraph/grid.hpp"

namespace foliagraph {

// A slit is a 2D segment; nodes within half the largest grid spacing of it
// are masked out of the domain.
struct SlitSpec {
  double x0, y0, x1, y1;
};

struct SampleRequest {
  GridSpec spec;
  std::vector<ExprPtr> component_exprs;  // dim entries
  std::vector<SlitSpec> slits;
  // extra mask predicate (true = mask out), used by built-ins
  std::function<bool(double, double, double)> mask_out;
};

// Pointwise evaluation over the grid. Throws VanishingFormError if the form
// has |w| < 1e-12 at an unmasked node, EvalError on evaluation failure.
SampledOneForm sample(const SampleRequest& request);

// Built-in sampled forms. Flags may override box and counts; the built-in
// supplies defaults and its own mask.
//   winding-cylinder  3D form whose leaves wind around {rho=1}
//   contact           dz - x dy (not integrable; wedge residual 1)
//   exact-ey          e^y dx (closed multiple exists: lambda = -y + const)
//   branch2           planar dx on a slit rectangle (one branching vertex)
//   branch3           planar three-prong family (triangle micrograph)
struct BuiltinForm {
  std::string name;
  GridSpec default_spec;
  std::string description;
};

const std::vector<BuiltinForm>& builtin_forms();
SampledOneForm sample_builtin(const std::string& name, std::optional<GridSpec> override_spec = {});

}  // namespace foliagraph
