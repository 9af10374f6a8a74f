#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "foliagraph/errors.hpp"

namespace foliagraph {

// Sentinel used in the JSON schema for an unbounded half-edge.
inline constexpr const char* kOpenEnd = "OPEN_END";

// One side of a macro-edge: either a vertex id or open (the edge runs out of
// the finite part of the leaf space on that side).
struct EdgeEnd {
  std::optional<std::string> vertex;

  bool open() const { return !vertex.has_value(); }
  const std::string& name() const { return *vertex; }
  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
  friend auto operator<=>(const EdgeEnd&, const EdgeEnd&) = default;
};

inline EdgeEnd open_end() { return EdgeEnd{}; }
inline EdgeEnd vertex_end(std::string id) { return EdgeEnd{std::move(id)}; }

struct Vertex {
  std::string id;
  bool endpoint = false;
};

struct Edge {
  std::string id;
  std::array<EdgeEnd, 2> ends;

  bool incident(const std::string& v) const {
    return (!ends[0].open() && ends[0].name() == v) || (!ends[1].open() && ends[1].name() == v);
  }
  // Position (0 or 1) of vertex v among the stored ends, -1 if absent.
  int end_pos(const std::string& v) const {
    if (!ends[0].open() && ends[0].name() == v) return 0;
    if (!ends[1].open() && ends[1].name() == v) return 1;
    return -1;
  }
};

// A micro-edge is a non-Hausdorff leaf sitting at a macro-vertex; it joins the
// two macro-edges whose leaf families limit onto it from either side.
struct MicroEdge {
  std::string id;
  std::array<std::string, 2> ends;  // macro-edge ids, unordered pair
};

struct Violation {
  std::string code;    // stable machine-readable tag
  std::string id;      // offending vertex/edge/micro-edge id
  std::string detail;  // human-readable sentence
};

struct GraphicalConfiguration {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::map<std::string, std::vector<MicroEdge>> micrographs;  // vertex id -> micro-edges

  const Vertex* vertex(const std::string& id) const;
  const Edge* edge(const std::string& id) const;
  const std::vector<MicroEdge>& micro_at(const std::string& vertex_id) const;
  // Ids of edges with at least one end at v, sorted, multi-edges once each.
  std::vector<std::string> incident_edges(const std::string& v) const;
};

// Empty result means the configuration satisfies every structural invariant.
std::vector<Violation> validate(const GraphicalConfiguration& config);

// Brute-force isomorphism for desk-sized configurations (<= 8 vertices).
// Edge end order and all ids are anonymous; endpoint flags and the full
// macro/micro incidence structure must match.
bool configs_isomorphic(const GraphicalConfiguration& a, const GraphicalConfiguration& b);

// Orientation of the macrograph: every edge gets an ordered (tail, head) pair
// that forgets back to its unordered ends.
struct Orientation {
  std::map<std::string, std::array<EdgeEnd, 2>> dir;

  const EdgeEnd& tail(const std::string& edge) const { return dir.at(edge)[0]; }
  const EdgeEnd& head(const std::string& edge) const { return dir.at(edge)[1]; }
  bool has(const std::string& edge) const { return dir.count(edge) != 0; }
};

// Per-vertex signs on the micro-vertices (incident macro-edges): +1 / -1.
struct Bipartition {
  std::map<std::string, std::map<std::string, int>> sign;  // vertex -> edge -> sign
};

struct EulerianCertificate {
  Orientation orientation;
  Bipartition bipartitions;
  std::map<std::string, long long> levels;  // a: vertex -> layer index
  std::map<std::string, double> epsilons;   // vertex -> separation radius (1/4)
};

struct Obstruction {
  enum class Kind {
    EndpointPresent,
    OddMicroCycle,
    ParityContradiction,
    OrientedMonochromeCycle,
  };

  // One step of a closed walk in the main graph. A micro step stays at
  // `at_vertex` and hops between the two macro-edges of micro-edge `id`; a
  // macro step walks edge `id` from one of its end vertices to the other.
  struct WalkStep {
    bool micro = false;
    std::string id;
    std::string at_vertex;  // vertex of the micrograph for micro steps
  };

  Kind kind = Kind::EndpointPresent;
  std::string vertex;                      // EndpointPresent, OddMicroCycle
  std::vector<std::string> micro_cycle;    // OddMicroCycle: cyclic micro-edge ids
  std::string walk_start_vertex;           // ParityContradiction
  std::string walk_start_edge;
  std::vector<WalkStep> walk;
  std::vector<std::string> cycle;          // OrientedMonochromeCycle: v0,e0,v1,e1,...
  Orientation orientation;                 // context in which `cycle` is oriented
};

using GlobalResult = std::variant<EulerianCertificate, Obstruction>;

inline bool eulerian(const GlobalResult& r) { return std::holds_alternative<EulerianCertificate>(r); }

const char* obstruction_kind_name(Obstruction::Kind k);

}  // namespace foliagraph
