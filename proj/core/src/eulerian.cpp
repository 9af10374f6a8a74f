#include "foliagraph/eulerian.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace foliagraph {

namespace {

std::vector<std::string> sorted_vertex_ids(const GraphicalConfiguration& config) {
  std::vector<std::string> ids;
  for (const auto& v : config.vertices) ids.push_back(v.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> sorted_edge_ids(const GraphicalConfiguration& config) {
  std::vector<std::string> ids;
  for (const auto& e : config.edges) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<MicroEdge> sorted_micros(const GraphicalConfiguration& config, const std::string& v) {
  auto micros = config.micro_at(v);
  std::sort(micros.begin(), micros.end(), [](const MicroEdge& a, const MicroEdge& b) { return a.id < b.id; });
  return micros;
}

}  // namespace

BipartiteResult is_bipartite(const GraphicalConfiguration& config, const std::string& vertex_id) {
  BipartiteResult res;
  auto verts = config.incident_edges(vertex_id);  // micro-vertices, sorted
  auto micros = sorted_micros(config, vertex_id);

  // adjacency in micro-edge id order
  std::map<std::string, std::vector<std::size_t>> adj;
  for (const auto& v : verts) adj[v];
  for (std::size_t i = 0; i < micros.size(); ++i) {
    adj[micros[i].ends[0]].push_back(i);
    adj[micros[i].ends[1]].push_back(i);
  }

  std::map<std::string, int> color;
  // BFS parent links for odd-cycle extraction
  std::map<std::string, std::pair<std::string, std::size_t>> parent;  // vertex -> (parent vertex, via micro)
  std::map<std::string, int> depth;

  for (const auto& root : verts) {
    if (color.count(root)) continue;
    color[root] = +1;  // canonical: smallest id of the component is +
    depth[root] = 0;
    std::deque<std::string> queue{root};
    while (!queue.empty()) {
      std::string u = queue.front();
      queue.pop_front();
      for (std::size_t mi : adj[u]) {
        const auto& m = micros[mi];
        const std::string& w = m.ends[0] == u ? m.ends[1] : m.ends[0];
        if (!color.count(w)) {
          color[w] = -color[u];
          depth[w] = depth[u] + 1;
          parent[w] = {u, mi};
          queue.push_back(w);
        } else if (color[w] == color[u] && w != u) {
          // Same color at both ends: walk both sides up to the common
          // ancestor; tree paths plus this edge close an odd cycle.
          std::vector<std::string> up_u, up_w;
          std::string x = u, y = w;
          auto via = [&](const std::string& z) { return micros[parent[z].second].id; };
          while (depth[x] > depth[y]) { up_u.push_back(via(x)); x = parent[x].first; }
          while (depth[y] > depth[x]) { up_w.push_back(via(y)); y = parent[y].first; }
          while (x != y) {
            up_u.push_back(via(x)); x = parent[x].first;
            up_w.push_back(via(y)); y = parent[y].first;
          }
          res.ok = false;
          res.odd_cycle = up_u;
          res.odd_cycle.push_back(m.id);
          for (auto it = up_w.rbegin(); it != up_w.rend(); ++it) res.odd_cycle.push_back(*it);
          return res;
        }
        // self-parallel micro edges (u == w) are flagged by validate; treat
        // as odd cycle of length 1 here so garbage input still gets a witness
        if (w == u) {
          res.ok = false;
          res.odd_cycle = {m.id};
          return res;
        }
      }
    }
  }

  res.ok = true;
  res.signs = std::move(color);
  return res;
}

std::optional<Obstruction> is_locally_eulerian(const GraphicalConfiguration& config) {
  for (const auto& vid : sorted_vertex_ids(config)) {
    const Vertex* v = config.vertex(vid);
    if (v->endpoint) {
      Obstruction obs;
      obs.kind = Obstruction::Kind::EndpointPresent;
      obs.vertex = vid;
      return obs;
    }
    auto bp = is_bipartite(config, vid);
    if (!bp.ok) {
      Obstruction obs;
      obs.kind = Obstruction::Kind::OddMicroCycle;
      obs.vertex = vid;
      obs.micro_cycle = bp.odd_cycle;
      return obs;
    }
  }
  return std::nullopt;
}

namespace {

// Union-find with parity: parity[i] is the orientation flip of element i
// relative to its root.
struct ParityUF {
  std::vector<int> parent;
  std::vector<unsigned char> parity;

  explicit ParityUF(std::size_t n) : parent(n), parity(n, 0) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  std::pair<int, int> find(int x) {
    if (parent[x] == x) return {x, 0};
    auto [r, p] = find(parent[x]);
    parent[x] = r;
    parity[x] = static_cast<unsigned char>(parity[x] ^ p);
    return {r, parity[x]};
  }
  // Returns false on contradiction with the requested relative parity.
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    // attach the larger root index below the smaller so roots are stable
    if (rb < ra) { std::swap(ra, rb); std::swap(pa, pb); }
    parent[rb] = ra;
    parity[rb] = static_cast<unsigned char>(pa ^ pb ^ rel);
    return true;
  }
};

struct Constraint {
  std::string vertex;
  std::string micro;
  int ea, eb;  // edge indices
  int rel;     // required x[ea] ^ x[eb]
};

struct Digraph {
  // closed-closed edges only, as (tail vertex index, head vertex index)
  std::vector<std::pair<int, int>> arcs;
  std::vector<std::string> arc_edge;  // edge id per arc
};

// Deterministic directed-cycle finder; returns alternating v,e,v,e,... list
// (closed: last edge returns to first vertex), or empty when acyclic.
std::vector<std::string> find_directed_cycle(const std::vector<std::string>& verts, const Digraph& g) {
  std::map<std::string, int> vidx;
  for (std::size_t i = 0; i < verts.size(); ++i) vidx[verts[i]] = static_cast<int>(i);
  std::vector<std::vector<std::pair<int, std::string>>> out(verts.size());
  for (std::size_t a = 0; a < g.arcs.size(); ++a)
    out[g.arcs[a].first].push_back({g.arcs[a].second, g.arc_edge[a]});
  for (auto& lst : out)
    std::sort(lst.begin(), lst.end(), [](const auto& x, const auto& y) { return x.second < y.second; });

  std::vector<int> state(verts.size(), 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<std::pair<int, std::string>> stack;  // (vertex, incoming edge)

  for (std::size_t root = 0; root < verts.size(); ++root) {
    if (state[root] != 0) continue;
    // iterative DFS with explicit edge iterators
    std::vector<std::pair<int, std::size_t>> frames{{static_cast<int>(root), 0}};
    stack.clear();
    stack.push_back({static_cast<int>(root), ""});
    state[root] = 1;
    while (!frames.empty()) {
      auto& [u, it] = frames.back();
      if (it < out[u].size()) {
        auto [w, eid] = out[u][it++];
        if (state[w] == 1) {
          // close the cycle at w
          std::vector<std::string> cyc;
          std::size_t start = 0;
          while (stack[start].first != w) ++start;
          for (std::size_t i = start; i < stack.size(); ++i) {
            cyc.push_back(verts[stack[i].first]);
            cyc.push_back(i + 1 < stack.size() ? stack[i + 1].second : eid);
          }
          return cyc;
        }
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, eid});
          frames.push_back({w, 0});
        }
      } else {
        state[u] = 2;
        frames.pop_back();
        if (!stack.empty()) stack.pop_back();
      }
    }
  }
  return {};
}

// Convert a cycle of parity constraints into a closed walk in the main graph.
Obstruction make_parity_witness(const std::vector<std::string>& edge_ids,
                                const std::vector<Constraint>& path, const Constraint& closing) {
  Obstruction obs;
  obs.kind = Obstruction::Kind::ParityContradiction;

  // The walk visits main-graph vertices (sigma, L). Between consecutive
  // constraints we may need one macro step to carry L to the next vertex.
  std::vector<Constraint> cyc = path;
  cyc.push_back(closing);

  obs.walk_start_vertex = cyc.front().vertex;
  obs.walk_start_edge = edge_ids[cyc.front().ea];

  int cur_edge = cyc.front().ea;
  std::string cur_vertex = cyc.front().vertex;
  for (const auto& c : cyc) {
    // bring the current micro-vertex copy to c.vertex along cur_edge
    int enter = c.ea == cur_edge ? c.ea : c.eb;  // the end shared with the incoming edge
    int other = enter == c.ea ? c.eb : c.ea;
    if (c.vertex != cur_vertex) {
      obs.walk.push_back({false, edge_ids[enter], cur_vertex});
      cur_vertex = c.vertex;
    }
    obs.walk.push_back({true, c.micro, c.vertex});
    cur_edge = other;
  }
  // walk home along the shared edge if the cycle closed at a different vertex
  if (cur_vertex != obs.walk_start_vertex)
    obs.walk.push_back({false, obs.walk_start_edge, cur_vertex});
  return obs;
}

}  // namespace

Levels assign_levels(const GraphicalConfiguration& config, const Orientation& orientation) {
  auto verts = sorted_vertex_ids(config);
  std::map<std::string, int> vidx;
  for (std::size_t i = 0; i < verts.size(); ++i) vidx[verts[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> out(verts.size());
  std::vector<int> indeg(verts.size(), 0);
  for (const auto& eid : sorted_edge_ids(config)) {
    if (!orientation.has(eid)) continue;
    const auto& t = orientation.tail(eid);
    const auto& h = orientation.head(eid);
    if (t.open() || h.open()) continue;
    out[vidx.at(t.name())].push_back(vidx.at(h.name()));
    ++indeg[vidx.at(h.name())];
  }

  // Kahn in sorted-vertex order; a = longest incoming path length.
  std::vector<long long> a(verts.size(), 0);
  std::deque<int> ready;
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
  std::size_t seen = 0;
  while (!ready.empty()) {
    int u = ready.front();
    ready.pop_front();
    ++seen;
    for (int w : out[u]) {
      a[w] = std::max(a[w], a[u] + 1);
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  if (seen != verts.size()) throw CycleError("orientation has a directed cycle; no level map exists");

  Levels lv;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    lv.a[verts[i]] = a[i];
    // adjacent layers differ by >= 1, so 1/4 < (1/3) * min gap
    lv.eps[verts[i]] = 0.25;
  }
  return lv;
}

namespace {

EulerianCertificate make_certificate(const GraphicalConfiguration& config,
                                     const std::map<std::string, int>& flip) {
  EulerianCertificate cert;
  for (const auto& e : config.edges) {
    auto ends = e.ends;
    if (flip.at(e.id)) std::swap(ends[0], ends[1]);
    cert.orientation.dir[e.id] = ends;
  }
  for (const auto& v : config.vertices) {
    auto& signs = cert.bipartitions.sign[v.id];
    for (const auto& eid : config.incident_edges(v.id)) {
      const auto& t = cert.orientation.tail(eid);
      signs[eid] = (!t.open() && t.name() == v.id) ? +1 : -1;
    }
  }
  auto lv = assign_levels(config, cert.orientation);
  cert.levels = std::move(lv.a);
  cert.epsilons = std::move(lv.eps);
  return cert;
}

Digraph build_digraph(const GraphicalConfiguration& config, const std::map<std::string, int>& vidx,
                      const std::map<std::string, int>& flip) {
  Digraph g;
  for (const auto& e : config.edges) {
    if (e.ends[0].open() || e.ends[1].open()) continue;
    int t = 0, h = 1;
    if (flip.at(e.id)) std::swap(t, h);
    g.arcs.push_back({vidx.at(e.ends[t].name()), vidx.at(e.ends[h].name())});
    g.arc_edge.push_back(e.id);
  }
  return g;
}

}  // namespace

GlobalResult solve_global(const GraphicalConfiguration& config, const SolveOptions& opts) {
  if (auto obs = is_locally_eulerian(config)) return *obs;

  auto edge_ids = sorted_edge_ids(config);
  std::map<std::string, int> eidx;
  for (std::size_t i = 0; i < edge_ids.size(); ++i) eidx[edge_ids[i]] = static_cast<int>(i);

  // Each micro-edge forces its two macro-edges into opposite roles at the
  // vertex: one out, one in. In parity terms over the stored end order:
  // x[a] ^ x[b] = 1 ^ pos(a) ^ pos(b).
  ParityUF uf(edge_ids.size());
  std::vector<Constraint> constraints;
  for (const auto& vid : sorted_vertex_ids(config)) {
    for (const auto& m : sorted_micros(config, vid)) {
      const Edge* ea = config.edge(m.ends[0]);
      const Edge* eb = config.edge(m.ends[1]);
      int rel = 1 ^ ea->end_pos(vid) ^ eb->end_pos(vid);
      Constraint c{vid, m.id, eidx[ea->id], eidx[eb->id], rel};
      if (!uf.unite(c.ea, c.eb, c.rel)) {
        // Recover a constraint path between the ends; together with c it
        // closes an odd walk in the main graph.
        std::vector<std::vector<std::size_t>> adj(edge_ids.size());
        for (std::size_t i = 0; i < constraints.size(); ++i) {
          adj[constraints[i].ea].push_back(i);
          adj[constraints[i].eb].push_back(i);
        }
        std::vector<int> prev(edge_ids.size(), -1), via(edge_ids.size(), -1);
        std::deque<int> q{c.ea};
        prev[c.ea] = c.ea;
        while (!q.empty()) {
          int u = q.front();
          q.pop_front();
          if (u == c.eb) break;
          for (std::size_t ci : adj[u]) {
            int w = constraints[ci].ea == u ? constraints[ci].eb : constraints[ci].ea;
            if (prev[w] == -1) {
              prev[w] = u;
              via[w] = static_cast<int>(ci);
              q.push_back(w);
            }
          }
        }
        std::vector<Constraint> path;
        for (int x = c.eb; x != c.ea; x = prev[x]) {
          Constraint step = constraints[via[x]];
          if (step.ea != prev[x]) std::swap(step.ea, step.eb);  // orient the step prev[x] -> x
          path.push_back(step);
        }
        std::reverse(path.begin(), path.end());
        // close with c traversed eb -> ea
        Constraint closing = c;
        std::swap(closing.ea, closing.eb);
        return make_parity_witness(edge_ids, path, closing);
      }
      constraints.push_back(c);
    }
  }

  // Parity classes; only classes touching a closed-closed edge can influence
  // the cycle condition, the rest stay at their stored orientation.
  std::map<int, int> class_of_root;  // root -> enumeration slot
  std::vector<int> class_roots;
  for (std::size_t i = 0; i < edge_ids.size(); ++i) {
    const Edge* e = config.edge(edge_ids[i]);
    if (e->ends[0].open() || e->ends[1].open()) continue;
    int root = uf.find(static_cast<int>(i)).first;
    if (!class_of_root.count(root)) {
      class_of_root[root] = static_cast<int>(class_roots.size());
      class_roots.push_back(root);
    }
  }
  if (static_cast<int>(class_roots.size()) > opts.max_free_classes)
    throw ExhaustionLimitError("free parity classes exceed bound (" +
                               std::to_string(class_roots.size()) + " > " +
                               std::to_string(opts.max_free_classes) + ")");

  auto verts = sorted_vertex_ids(config);
  std::map<std::string, int> vidx;
  for (std::size_t i = 0; i < verts.size(); ++i) vidx[verts[i]] = static_cast<int>(i);

  std::vector<std::string> first_cycle;
  std::map<std::string, int> first_flip;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << class_roots.size()); ++mask) {
    std::map<std::string, int> flip;
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
      auto [root, par] = uf.find(static_cast<int>(i));
      int cls_flip = 0;
      auto it = class_of_root.find(root);
      if (it != class_of_root.end()) cls_flip = (mask >> it->second) & 1;
      flip[edge_ids[i]] = par ^ cls_flip;
    }
    auto cycle = find_directed_cycle(verts, build_digraph(config, vidx, flip));
    if (cycle.empty()) return make_certificate(config, flip);
    if (mask == 0) {
      first_cycle = std::move(cycle);
      first_flip = std::move(flip);
    }
  }

  // Every consistent orientation has a directed cycle; report the one seen
  // under the canonical assignment together with that orientation.
  Obstruction obs;
  obs.kind = Obstruction::Kind::OrientedMonochromeCycle;
  obs.cycle = std::move(first_cycle);
  for (const auto& e : config.edges) {
    auto ends = e.ends;
    if (first_flip.at(e.id)) std::swap(ends[0], ends[1]);
    obs.orientation.dir[e.id] = ends;
  }
  return obs;
}

GlobalResult brute_force_global(const GraphicalConfiguration& config) {
  if (config.edges.size() > 12) throw SizeLimitError("brute force limited to 12 edges");
  if (auto obs = is_locally_eulerian(config)) return *obs;

  auto edge_ids = sorted_edge_ids(config);
  auto verts = sorted_vertex_ids(config);
  std::map<std::string, int> vidx;
  for (std::size_t i = 0; i < verts.size(); ++i) vidx[verts[i]] = static_cast<int>(i);

  bool any_compat = false;
  std::vector<std::string> compat_cycle;
  std::map<std::string, int> compat_flip;

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edge_ids.size()); ++mask) {
    std::map<std::string, int> flip;
    for (std::size_t i = 0; i < edge_ids.size(); ++i) flip[edge_ids[i]] = (mask >> i) & 1;

    // micro compatibility: out/in roles differ at every micro-edge
    bool ok = true;
    for (const auto& v : config.vertices) {
      for (const auto& m : config.micro_at(v.id)) {
        const Edge* ea = config.edge(m.ends[0]);
        const Edge* eb = config.edge(m.ends[1]);
        int sa = flip.at(ea->id) ^ ea->end_pos(v.id);  // 0 = tail at v
        int sb = flip.at(eb->id) ^ eb->end_pos(v.id);
        if (sa == sb) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) continue;

    auto cycle = find_directed_cycle(verts, build_digraph(config, vidx, flip));
    if (cycle.empty()) return make_certificate(config, flip);
    if (!any_compat) {
      any_compat = true;
      compat_cycle = std::move(cycle);
      compat_flip = std::move(flip);
    }
  }

  Obstruction obs;
  if (!any_compat) {
    // no orientation satisfies the micro constraints; defer to the exact
    // solver's parity analysis for a concrete witness
    auto r = solve_global(config);
    return std::get<Obstruction>(r);
  }
  obs.kind = Obstruction::Kind::OrientedMonochromeCycle;
  obs.cycle = std::move(compat_cycle);
  for (const auto& e : config.edges) {
    auto ends = e.ends;
    if (compat_flip.at(e.id)) std::swap(ends[0], ends[1]);
    obs.orientation.dir[e.id] = ends;
  }
  return obs;
}

bool verify_certificate(const GraphicalConfiguration& config, const EulerianCertificate& cert,
                        std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };

  if (cert.orientation.dir.size() != config.edges.size()) return fail("orientation does not cover all edges");
  for (const auto& e : config.edges) {
    if (!cert.orientation.has(e.id)) return fail("edge " + e.id + " missing from orientation");
    const auto& d = cert.orientation.dir.at(e.id);
    bool same = d[0] == e.ends[0] && d[1] == e.ends[1];
    bool swapped = d[0] == e.ends[1] && d[1] == e.ends[0];
    if (!same && !swapped) return fail("orientation of " + e.id + " does not forget to its ends");
  }

  for (const auto& v : config.vertices) {
    auto it = cert.bipartitions.sign.find(v.id);
    if (it == cert.bipartitions.sign.end()) return fail("vertex " + v.id + " missing bipartition");
    auto incident = config.incident_edges(v.id);
    if (it->second.size() != incident.size()) return fail("bipartition of " + v.id + " wrong support");
    for (const auto& eid : incident) {
      auto jt = it->second.find(eid);
      if (jt == it->second.end()) return fail("bipartition of " + v.id + " misses edge " + eid);
      const auto& t = cert.orientation.tail(eid);
      int expect = (!t.open() && t.name() == v.id) ? +1 : -1;
      if (jt->second != expect) return fail("sign of " + eid + " at " + v.id + " incompatible with orientation");
    }
    for (const auto& m : config.micro_at(v.id))
      if (it->second.at(m.ends[0]) == it->second.at(m.ends[1]))
        return fail("micro-edge " + m.id + " joins equal signs");
  }

  for (const auto& e : config.edges) {
    const auto& t = cert.orientation.tail(e.id);
    const auto& h = cert.orientation.head(e.id);
    if (t.open() || h.open()) continue;
    if (cert.levels.at(t.name()) >= cert.levels.at(h.name()))
      return fail("level map not strictly monotone along " + e.id);
  }
  for (const auto& v : config.vertices) {
    if (!cert.levels.count(v.id) || !cert.epsilons.count(v.id))
      return fail("vertex " + v.id + " missing level or epsilon");
    double eps = cert.epsilons.at(v.id);
    if (eps <= 0) return fail("epsilon not positive at " + v.id);
    for (const auto& eid : config.incident_edges(v.id)) {
      const Edge* e = config.edge(eid);
      for (const auto& end : e->ends) {
        if (end.open() || end.name() == v.id) continue;
        double gap = static_cast<double>(cert.levels.at(end.name()) - cert.levels.at(v.id));
        if (!(eps < std::abs(gap) / 3.0)) return fail("epsilon rule violated at " + v.id);
      }
    }
  }
  return true;
}

bool verify_obstruction(const GraphicalConfiguration& config, const Obstruction& obs, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };

  switch (obs.kind) {
    case Obstruction::Kind::EndpointPresent: {
      const Vertex* v = config.vertex(obs.vertex);
      if (!v) return fail("unknown vertex " + obs.vertex);
      if (!v->endpoint) return fail("vertex " + obs.vertex + " is not endpoint-flagged");
      return true;
    }
    case Obstruction::Kind::OddMicroCycle: {
      if (obs.micro_cycle.empty() || obs.micro_cycle.size() % 2 == 0)
        return fail("micro cycle not of odd length");
      auto micros = config.micro_at(obs.vertex);
      std::map<std::string, const MicroEdge*> by_id;
      for (const auto& m : micros) by_id[m.id] = &m;
      std::set<std::string> used;
      for (const auto& id : obs.micro_cycle) {
        if (!by_id.count(id)) return fail("micro-edge " + id + " not at vertex " + obs.vertex);
        if (!used.insert(id).second) return fail("micro-edge " + id + " repeated in cycle");
      }
      // the listed micro-edges must chain into a closed walk; each step
      // shares one micro-vertex with the next, entering and leaving on
      // different macro-edges
      const std::size_t n = obs.micro_cycle.size();
      for (int dir0 = 0; dir0 < 2; ++dir0) {
        std::string cur = by_id.at(obs.micro_cycle[0])->ends[dir0];
        std::string entry = by_id.at(obs.micro_cycle[0])->ends[1 - dir0];
        bool ok = true;
        for (std::size_t i = 1; i <= n; ++i) {
          const MicroEdge* m = by_id.at(obs.micro_cycle[i % n]);
          if (i == n) {
            ok = cur == entry;
            break;
          }
          if (m->ends[0] == cur) cur = m->ends[1];
          else if (m->ends[1] == cur) cur = m->ends[0];
          else { ok = false; break; }
        }
        if (ok) return true;
      }
      return fail("micro cycle does not close up");
    }
    case Obstruction::Kind::ParityContradiction: {
      if (obs.walk.empty()) return fail("empty walk");
      // walk the main graph, tracking the current (vertex, edge) copy
      std::string v = obs.walk_start_vertex;
      std::string e = obs.walk_start_edge;
      for (const auto& step : obs.walk) {
        if (step.micro) {
          if (step.at_vertex != v) return fail("micro step at wrong vertex");
          const MicroEdge* m = nullptr;
          for (const auto& cand : config.micro_at(v))
            if (cand.id == step.id) m = &cand;
          if (!m) return fail("unknown micro-edge " + step.id + " at " + v);
          if (m->ends[0] == e) e = m->ends[1];
          else if (m->ends[1] == e) e = m->ends[0];
          else return fail("micro step does not touch current edge");
        } else {
          if (step.id != e) return fail("macro step must walk the current edge");
          const Edge* ed = config.edge(e);
          if (!ed) return fail("unknown edge " + e);
          int pos = ed->end_pos(v);
          if (pos < 0) return fail("current vertex not an end of " + e);
          const auto& other = ed->ends[1 - pos];
          if (other.open()) return fail("macro step walks into an open end");
          v = other.name();
        }
      }
      if (v != obs.walk_start_vertex || e != obs.walk_start_edge) return fail("walk does not close");
      if (obs.walk.size() % 2 == 0) return fail("closed walk has even length; no contradiction");
      return true;
    }
    case Obstruction::Kind::OrientedMonochromeCycle: {
      if (obs.cycle.size() < 4 || obs.cycle.size() % 2 != 0) return fail("malformed cycle list");
      // the carried orientation must be a genuine orientation compatible
      // with every micro-edge, and the cycle directed under it
      for (const auto& e : config.edges) {
        if (!obs.orientation.has(e.id)) return fail("orientation misses edge " + e.id);
        const auto& d = obs.orientation.dir.at(e.id);
        bool same = d[0] == e.ends[0] && d[1] == e.ends[1];
        bool swapped = d[0] == e.ends[1] && d[1] == e.ends[0];
        if (!same && !swapped) return fail("orientation of " + e.id + " invalid");
      }
      for (const auto& v : config.vertices) {
        for (const auto& m : config.micro_at(v.id)) {
          auto sign = [&](const std::string& eid) {
            const auto& t = obs.orientation.tail(eid);
            return (!t.open() && t.name() == v.id) ? +1 : -1;
          };
          if (sign(m.ends[0]) == sign(m.ends[1]))
            return fail("orientation not compatible with micro-edge " + m.id);
        }
      }
      const std::size_t n = obs.cycle.size() / 2;
      bool all_fwd = true, all_bwd = true;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string& v0 = obs.cycle[2 * i];
        const std::string& e = obs.cycle[2 * i + 1];
        const std::string& v1 = obs.cycle[(2 * i + 2) % obs.cycle.size()];
        if (!config.vertex(v0) || !config.edge(e)) return fail("cycle references unknown ids");
        const auto& t = obs.orientation.tail(e);
        const auto& h = obs.orientation.head(e);
        if (t.open() || h.open()) return fail("cycle uses an open-ended edge");
        if (!(t.name() == v0 && h.name() == v1)) all_fwd = false;
        if (!(t.name() == v1 && h.name() == v0)) all_bwd = false;
      }
      if (!all_fwd && !all_bwd) return fail("cycle not coherently oriented");
      return true;
    }
  }
  return fail("unknown obstruction kind");
}

}  // namespace foliagraph
