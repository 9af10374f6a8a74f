#pragma once

#include <optional>

#include "foliagraph/config.hpp"

namespace foliagraph {

struct BipartiteResult {
  bool ok = false;
  // Sign per micro-vertex (incident macro-edge id). The lexicographically
  // smallest micro-vertex of each connected component gets +1.
  std::map<std::string, int> signs;
  // On failure: cyclic list of micro-edge ids forming an odd simple cycle.
  std::vector<std::string> odd_cycle;
};

BipartiteResult is_bipartite(const GraphicalConfiguration& config, const std::string& vertex_id);

// std::nullopt on success; otherwise the first obstruction scanning vertices
// in sorted id order (endpoint flag checked before the micrograph).
std::optional<Obstruction> is_locally_eulerian(const GraphicalConfiguration& config);

struct SolveOptions {
  // Orientation search is exact over the free parity classes; beyond this
  // many classes the instance is rejected with ExhaustionLimitError.
  int max_free_classes = 20;
};

GlobalResult solve_global(const GraphicalConfiguration& config, const SolveOptions& opts = {});

// Testing oracle: enumerates all 2^|E| orientations. Throws SizeLimitError
// beyond 12 edges. Agrees with solve_global on feasibility.
GlobalResult brute_force_global(const GraphicalConfiguration& config);

struct Levels {
  std::map<std::string, long long> a;
  std::map<std::string, double> eps;
};

// Longest-path layering over the oriented closed-closed edges; throws
// CycleError when the orientation has a directed cycle.
Levels assign_levels(const GraphicalConfiguration& config, const Orientation& orientation);

// Certificate / witness re-validation, used by tests and the CLI.
bool verify_certificate(const GraphicalConfiguration& config, const EulerianCertificate& cert,
                        std::string* why = nullptr);
bool verify_obstruction(const GraphicalConfiguration& config, const Obstruction& obs,
                        std::string* why = nullptr);

}  // namespace foliagraph
