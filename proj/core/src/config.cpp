#include "foliagraph/config.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace foliagraph {

const Vertex* GraphicalConfiguration::vertex(const std::string& id) const {
  for (const auto& v : vertices)
    if (v.id == id) return &v;
  return nullptr;
}

const Edge* GraphicalConfiguration::edge(const std::string& id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

const std::vector<MicroEdge>& GraphicalConfiguration::micro_at(const std::string& vertex_id) const {
  static const std::vector<MicroEdge> empty;
  auto it = micrographs.find(vertex_id);
  return it == micrographs.end() ? empty : it->second;
}

std::vector<std::string> GraphicalConfiguration::incident_edges(const std::string& v) const {
  std::vector<std::string> out;
  for (const auto& e : edges)
    if (e.incident(v)) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Violation> validate(const GraphicalConfiguration& config) {
  std::vector<Violation> out;
  auto flag = [&](std::string code, std::string id, std::string detail) {
    out.push_back({std::move(code), std::move(id), std::move(detail)});
  };

  std::set<std::string> vertex_ids;
  for (const auto& v : config.vertices) {
    if (v.id.empty()) flag("empty-id", v.id, "vertex with empty id");
    if (!vertex_ids.insert(v.id).second) flag("duplicate-vertex-id", v.id, "vertex id appears twice");
  }

  std::set<std::string> edge_ids;
  for (const auto& e : config.edges) {
    if (e.id.empty()) flag("empty-id", e.id, "edge with empty id");
    if (!edge_ids.insert(e.id).second) flag("duplicate-edge-id", e.id, "edge id appears twice");
    // both ends may be open: a line component of the leaf space with no
    // branching at all (the trivial configuration)
    for (const auto& end : e.ends)
      if (!end.open() && !vertex_ids.count(end.name()))
        flag("unknown-end-vertex", e.id, "edge end references unknown vertex " + end.name());
    if (!e.ends[0].open() && !e.ends[1].open() && e.ends[0].name() == e.ends[1].name())
      flag("loop-edge", e.id, "edge joins vertex " + e.ends[0].name() + " to itself");
  }

  std::set<std::string> micro_ids;
  for (const auto& [vid, micros] : config.micrographs) {
    const Vertex* v = config.vertex(vid);
    if (!v) {
      flag("unknown-micrograph-vertex", vid, "micrograph attached to unknown vertex");
      continue;
    }
    if (v->endpoint && !micros.empty())
      flag("endpoint-with-micrograph", vid, "endpoint vertex carries micro-edges");
    for (const auto& m : micros) {
      if (m.id.empty()) flag("empty-id", m.id, "micro-edge with empty id");
      if (!micro_ids.insert(m.id).second)
        flag("duplicate-micro-id", m.id, "micro-edge id appears twice");
      if (m.ends[0] == m.ends[1])
        flag("micro-edge-ends-equal", m.id, "micro-edge ends equal: joins " + m.ends[0] + " to itself");
      for (const auto& eid : m.ends) {
        const Edge* e = config.edge(eid);
        if (!e)
          flag("unknown-micro-vertex", m.id, "micro-edge references unknown edge " + eid);
        else if (!e->incident(vid))
          flag("non-incident-micro-vertex", m.id,
               "non-incident micro-vertex: edge " + eid + " does not meet vertex " + vid);
      }
    }
  }

  return out;
}

const char* obstruction_kind_name(Obstruction::Kind k) {
  switch (k) {
    case Obstruction::Kind::EndpointPresent: return "endpoint_present";
    case Obstruction::Kind::OddMicroCycle: return "odd_micro_cycle";
    case Obstruction::Kind::ParityContradiction: return "parity_contradiction";
    case Obstruction::Kind::OrientedMonochromeCycle: return "oriented_monochrome_cycle";
  }
  return "unknown";
}

namespace {

// multiset of (unordered mapped ends) for edges, OPEN_END kept as-is
struct EdgeKey {
  std::string a, b;  // a <= b, open encoded as "\x01open"
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

EdgeKey key_of(const Edge& e, const std::map<std::string, std::string>& vmap) {
  auto enc = [&](const EdgeEnd& end) -> std::string {
    return end.open() ? std::string("\x01open") : vmap.at(end.name());
  };
  EdgeKey k{enc(e.ends[0]), enc(e.ends[1])};
  if (k.b < k.a) std::swap(k.a, k.b);
  return k;
}

// With vertices mapped and a candidate edge bijection, micrographs must agree
// as multisets of unordered edge-id pairs at every vertex.
bool micros_match(const GraphicalConfiguration& a, const GraphicalConfiguration& b,
                  const std::map<std::string, std::string>& vmap,
                  const std::map<std::string, std::string>& emap) {
  for (const auto& va : a.vertices) {
    const std::string& vb = vmap.at(va.id);
    std::multiset<std::pair<std::string, std::string>> ma, mb;
    for (const auto& m : a.micro_at(va.id)) {
      auto x = emap.at(m.ends[0]), y = emap.at(m.ends[1]);
      if (y < x) std::swap(x, y);
      ma.insert({x, y});
    }
    for (const auto& m : b.micro_at(vb)) {
      auto x = m.ends[0], y = m.ends[1];
      if (y < x) std::swap(x, y);
      mb.insert({x, y});
    }
    if (ma != mb) return false;
  }
  return true;
}

bool try_edge_assignment(const GraphicalConfiguration& a, const GraphicalConfiguration& b,
                         const std::map<std::string, std::string>& vmap,
                         std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& groups,
                         std::size_t gi, std::map<std::string, std::string>& emap) {
  if (gi == groups.size()) return micros_match(a, b, vmap, emap);
  auto& [ga, gb] = groups[gi];
  std::sort(gb.begin(), gb.end());
  do {
    for (std::size_t i = 0; i < ga.size(); ++i) emap[ga[i]] = gb[i];
    if (try_edge_assignment(a, b, vmap, groups, gi + 1, emap)) return true;
  } while (std::next_permutation(gb.begin(), gb.end()));
  return false;
}

}  // namespace

bool configs_isomorphic(const GraphicalConfiguration& a, const GraphicalConfiguration& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
  std::size_t ma = 0, mb = 0;
  for (const auto& [v, ms] : a.micrographs) ma += ms.size();
  for (const auto& [v, ms] : b.micrographs) mb += ms.size();
  if (ma != mb) return false;

  std::vector<std::string> bverts;
  for (const auto& v : b.vertices) bverts.push_back(v.id);
  std::sort(bverts.begin(), bverts.end());

  do {
    std::map<std::string, std::string> vmap;
    bool flags_ok = true;
    for (std::size_t i = 0; i < a.vertices.size(); ++i) {
      vmap[a.vertices[i].id] = bverts[i];
      if (a.vertices[i].endpoint != b.vertex(bverts[i])->endpoint) {
        flags_ok = false;
        break;
      }
    }
    if (!flags_ok) continue;

    // Group edges by mapped end pair; groups must align in size.
    std::map<EdgeKey, std::pair<std::vector<std::string>, std::vector<std::string>>> grouped;
    std::map<std::string, std::string> idmap;  // identity map for b's own keys
    for (const auto& v : b.vertices) idmap[v.id] = v.id;
    for (const auto& e : a.edges) grouped[key_of(e, vmap)].first.push_back(e.id);
    bool sizes_ok = true;
    for (const auto& e : b.edges) grouped[key_of(e, idmap)].second.push_back(e.id);
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> groups;
    for (auto& [k, g] : grouped) {
      if (g.first.size() != g.second.size()) {
        sizes_ok = false;
        break;
      }
      groups.push_back(g);
    }
    if (!sizes_ok) continue;

    std::map<std::string, std::string> emap;
    if (try_edge_assignment(a, b, vmap, groups, 0, emap)) return true;
  } while (std::next_permutation(bverts.begin(), bverts.end()));

  return false;
}

}  // namespace foliagraph
