#pragma once

#include "foliagraph/eulerian.hpp"
#include "foliagraph/leaf_config.hpp"

namespace foliagraph {

struct MultiplierReport {
  double min_abs_grad_f = 0;
  double min_abs_lambda = 0;
  double max_rel_residual = 0;
  double min_transversal_quotient = 0;  // smallest node-to-node increment along charts
};

struct MultiplierResult {
  ScalarGrid f;
  ScalarGrid lambda;
  MultiplierReport report;
};

struct BuildFOptions {
  double assign_tube_factor = 1.5;  // node-to-class assignment radius, grid units
};

// First integral from a certificate: every edge chart is mapped through a
// smoothstep onto its level window (a(tail), a(head)); branching classes sit
// at their vertex level. Throws NotEulerianError when handed an obstruction
// via the result wrapper, ChartGapError when a node's class is unresolved.
ScalarGrid build_f(const LeafSpaceGraph& graph, const EulerianCertificate& cert,
                   const LeafField& field, const SampledOneForm& form,
                   const BuildFOptions& opts = {});

// lambda = (df . omega) / |omega|^2 with central differences, plus the
// pointwise relative residual of df = lambda * omega.
MultiplierResult compute_lambda(const ScalarGrid& f, const SampledOneForm& form);

struct VerifyOptions {
  double residual_threshold = 1e-3;
};

struct VerifyReport {
  bool pass = false;
  std::string worst;  // human-readable location of the failure
};

VerifyReport verify(const MultiplierResult& result, const VerifyOptions& opts = {});

}  // namespace foliagraph
