#include "foliagraph/main_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace foliagraph {

int betti1(const Multigraph& g) {
  std::vector<int> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [a, b] : g.edges) parent[find(a)] = find(b);
  int comps = 0;
  for (int i = 0; i < g.n; ++i)
    if (find(i) == i) ++comps;
  return static_cast<int>(g.edges.size()) - g.n + comps;
}

Multigraph build_main_graph(const GraphicalConfiguration& config) {
  Multigraph g;
  std::map<std::pair<std::string, std::string>, int> idx;  // (vertex, edge) -> node

  std::vector<std::string> verts;
  for (const auto& v : config.vertices) verts.push_back(v.id);
  std::sort(verts.begin(), verts.end());
  std::vector<std::string> eids;
  for (const auto& e : config.edges) eids.push_back(e.id);
  std::sort(eids.begin(), eids.end());

  for (const auto& vid : verts) {
    for (const auto& eid : config.incident_edges(vid)) {
      idx[{vid, eid}] = g.n++;
      g.vertex_labels.push_back(vid + "|" + eid);
    }
  }
  // one fresh leaf vertex per open half-edge
  std::map<std::pair<std::string, int>, int> open_idx;
  for (const auto& eid : eids) {
    const Edge* e = config.edge(eid);
    for (int side = 0; side < 2; ++side) {
      if (!e->ends[side].open()) continue;
      open_idx[{eid, side}] = g.n++;
      g.vertex_labels.push_back("open|" + eid + "|" + std::to_string(side));
    }
  }

  for (const auto& vid : verts) {
    auto micros = config.micro_at(vid);
    std::sort(micros.begin(), micros.end(), [](const MicroEdge& a, const MicroEdge& b) { return a.id < b.id; });
    for (const auto& m : micros) {
      g.edges.push_back({idx.at({vid, m.ends[0]}), idx.at({vid, m.ends[1]})});
      g.edge_labels.push_back(m.id);
    }
  }
  for (const auto& eid : eids) {
    const Edge* e = config.edge(eid);
    int a = e->ends[0].open() ? open_idx.at({eid, 0}) : idx.at({e->ends[0].name(), eid});
    int b = e->ends[1].open() ? open_idx.at({eid, 1}) : idx.at({e->ends[1].name(), eid});
    g.edges.push_back({a, b});
    g.edge_labels.push_back(eid);
  }
  return g;
}

Multigraph macrograph(const GraphicalConfiguration& config) {
  Multigraph g;
  std::map<std::string, int> idx;
  std::vector<std::string> verts;
  for (const auto& v : config.vertices) verts.push_back(v.id);
  std::sort(verts.begin(), verts.end());
  for (const auto& vid : verts) {
    idx[vid] = g.n++;
    g.vertex_labels.push_back(vid);
  }
  std::vector<std::string> eids;
  for (const auto& e : config.edges) eids.push_back(e.id);
  std::sort(eids.begin(), eids.end());
  for (const auto& eid : eids) {
    const Edge* e = config.edge(eid);
    int ends[2];
    for (int side = 0; side < 2; ++side) {
      if (e->ends[side].open()) {
        ends[side] = g.n++;
        g.vertex_labels.push_back("open|" + eid + "|" + std::to_string(side));
      } else {
        ends[side] = idx.at(e->ends[side].name());
      }
    }
    g.edges.push_back({ends[0], ends[1]});
    g.edge_labels.push_back(eid);
  }
  return g;
}

Multigraph micrograph_of(const GraphicalConfiguration& config, const std::string& vertex_id) {
  Multigraph g;
  std::map<std::string, int> idx;
  for (const auto& eid : config.incident_edges(vertex_id)) {
    idx[eid] = g.n++;
    g.vertex_labels.push_back(eid);
  }
  auto micros = config.micro_at(vertex_id);
  std::sort(micros.begin(), micros.end(), [](const MicroEdge& a, const MicroEdge& b) { return a.id < b.id; });
  for (const auto& m : micros) {
    g.edges.push_back({idx.at(m.ends[0]), idx.at(m.ends[1])});
    g.edge_labels.push_back(m.id);
  }
  return g;
}

}  // namespace foliagraph
