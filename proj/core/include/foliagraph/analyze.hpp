#pragma once

#include <optional>

#include "foliagraph/classify.hpp"
#include "foliagraph/leaf_config.hpp"
#include "foliagraph/multiplier.hpp"

namespace foliagraph {

struct AnalyzeOptions {
  ClassifyOptions classify;
  DetectOptions detect;
  NetOptions net;
  BuildOptions build;
  bool allow_fastpath = true;
  double fastpath_ratio_cap = 1e3;
};

struct AnalysisResult {
  bool fastpath = false;
  LeafSpaceGraph graph;
  std::optional<GlobalResult> decision;
  std::optional<MultiplierResult> multiplier;
  std::string multiplier_error;
  LeafField field;          // empty when the fast path fired
  TransversalNet net;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> endpoints;
};

// Full pipeline: transversal net, leaf classification, branching detection,
// configuration assembly, eulerian decision, and (when globally eulerian)
// the first integral and multiplier.
AnalysisResult analyze(const SampledOneForm& form, const AnalyzeOptions& opts = {});

// SVG of traced leaves colored by class, branching classes bold.
std::string leaves_svg(const LeafField& field, const SampledOneForm& form,
                       const std::vector<std::pair<std::string, std::string>>& pairs);

std::string charts_to_json(const LeafSpaceGraph& graph);

}  // namespace foliagraph
