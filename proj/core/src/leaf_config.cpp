#include "foliagraph/leaf_config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace foliagraph {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

LeafSpaceGraph build_configuration(const LeafField& field, const TransversalNet& net,
                                   const SampledOneForm& form,
                                   const std::vector<std::pair<std::string, std::string>>& pairs,
                                   const std::vector<std::string>& endpoints,
                                   const BuildOptions& opts) {
  LeafSpaceGraph out;
  const std::size_t n_classes = field.classes.size();
  std::map<std::string, int> class_idx;
  for (std::size_t c = 0; c < n_classes; ++c) class_idx[field.classes[c].id] = static_cast<int>(c);

  std::vector<bool> flagged(n_classes, false);
  for (const auto& [a, b] : pairs) {
    flagged[class_idx.at(a)] = true;
    flagged[class_idx.at(b)] = true;
  }
  std::vector<bool> endpoint_class(n_classes, false);
  for (const auto& e : endpoints) {
    int c = class_idx.at(e);
    if (!flagged[c]) {
      endpoint_class[c] = true;
      flagged[c] = true;
    }
  }

  // per-transversal sorted intercept lists
  std::vector<std::vector<std::pair<double, int>>> tv(net.transversals.size());
  for (std::size_t c = 0; c < n_classes; ++c)
    for (const auto& ic : field.classes[c].intercepts)
      tv[ic.transversal].push_back({ic.param, static_cast<int>(c)});
  for (auto& v : tv) std::sort(v.begin(), v.end());

  // Branching units: flagged classes within the condensation window on one
  // transversal collapse into one non-Hausdorff unit, absorbing whatever
  // sits sandwiched between them (typically the branching leaf itself, which
  // the flagged flank classes shield from direct detection).
  const double condense = opts.condense_factor * form.spec.max_spacing();
  UnionFind unit_uf(n_classes);
  for (int pass = 0; pass < 3; ++pass) {
    for (const auto& list : tv) {
      long prev_flagged = -1;
      for (std::size_t q = 0; q < list.size(); ++q) {
        if (!flagged[list[q].second]) continue;
        if (prev_flagged >= 0 && list[q].first - list[prev_flagged].first <= condense) {
          unit_uf.unite(list[prev_flagged].second, list[q].second);
          for (long m = prev_flagged + 1; m < static_cast<long>(q); ++m) {
            flagged[list[m].second] = true;
            unit_uf.unite(list[q].second, list[m].second);
          }
        }
        prev_flagged = static_cast<long>(q);
      }
    }
  }

  // Vertices: transitive closure of inseparable pairs over units; endpoint
  // units are their own vertices.
  UnionFind vert_uf(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    if (flagged[c]) vert_uf.unite(static_cast<int>(c), unit_uf.find(static_cast<int>(c)));
  for (const auto& [a, b] : pairs) vert_uf.unite(class_idx.at(a), class_idx.at(b));

  // Edges: maximal runs of regular classes, joined across transversals.
  UnionFind edge_uf(n_classes);
  for (const auto& list : tv)
    for (std::size_t q = 0; q + 1 < list.size(); ++q) {
      int a = list[q].second, b = list[q + 1].second;
      if (!flagged[a] && !flagged[b]) edge_uf.unite(a, b);
    }

  // deterministic ids in order of smallest member class
  std::map<int, std::string> vertex_of_root, edge_of_root, unit_id;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (flagged[c]) {
      int r = vert_uf.find(static_cast<int>(c));
      if (!vertex_of_root.count(r)) {
        std::string vid = "v" + std::to_string(vertex_of_root.size());
        vertex_of_root[r] = vid;
        out.config.vertices.push_back({vid, endpoint_class[c]});
      }
      out.vertex_of_class[field.classes[c].id] = vertex_of_root.at(r);
    } else {
      int r = edge_uf.find(static_cast<int>(c));
      if (!edge_of_root.count(r)) edge_of_root[r] = "e" + std::to_string(edge_of_root.size());
      out.edge_of_class[field.classes[c].id] = edge_of_root.at(r);
    }
  }

  auto edge_of = [&](int c) -> std::string { return edge_of_root.at(edge_uf.find(c)); };
  auto vertex_of = [&](int c) -> std::string { return vertex_of_root.at(vert_uf.find(c)); };

  // chart frame per edge: the transversal carrying its longest run
  struct Run {
    int transversal;
    std::size_t first, last;  // positions in tv[t]
  };
  std::map<std::string, std::vector<Run>> runs_of_edge;
  for (std::size_t t = 0; t < tv.size(); ++t) {
    const auto& list = tv[t];
    std::size_t q = 0;
    while (q < list.size()) {
      if (flagged[list[q].second]) {
        ++q;
        continue;
      }
      std::size_t start = q;
      std::string eid = edge_of(list[q].second);
      while (q < list.size() && !flagged[list[q].second]) ++q;
      runs_of_edge[eid].push_back({static_cast<int>(t), start, q - 1});
    }
  }

  // edge ends from the chart run's outer neighbours; other runs must agree
  for (const auto& [eid, runs] : runs_of_edge) {
    const Run* chart = &runs[0];
    for (const auto& r : runs)
      if (r.last - r.first > chart->last - chart->first) chart = &r;

    auto end_at = [&](const Run& r, int side) -> std::optional<std::string> {
      const auto& list = tv[r.transversal];
      long q = side == 0 ? static_cast<long>(r.first) - 1 : static_cast<long>(r.last) + 1;
      if (q < 0 || q >= static_cast<long>(list.size())) return std::nullopt;  // open
      return vertex_of(list[q].second);
    };

    Edge edge;
    edge.id = eid;
    auto lo_end = end_at(*chart, 0), hi_end = end_at(*chart, 1);
    edge.ends[0] = lo_end ? vertex_end(*lo_end) : open_end();
    edge.ends[1] = hi_end ? vertex_end(*hi_end) : open_end();

    // collect every adjacent vertex over all runs; reconcile with the chart
    std::set<std::string> adjacent;
    for (const auto& r : runs) {
      if (auto v = end_at(r, 0)) adjacent.insert(*v);
      if (auto v = end_at(r, 1)) adjacent.insert(*v);
    }
    std::set<std::string> assigned;
    if (lo_end) assigned.insert(*lo_end);
    if (hi_end) assigned.insert(*hi_end);
    for (const auto& v : adjacent) {
      if (assigned.count(v)) continue;
      if (edge.ends[0].open()) {
        edge.ends[0] = vertex_end(v);
        assigned.insert(v);
      } else if (edge.ends[1].open()) {
        edge.ends[1] = vertex_end(v);
        assigned.insert(v);
      } else {
        throw AmbiguityError("edge " + eid + " limits onto more than two vertices; refine the grid");
      }
    }

    out.config.edges.push_back(edge);

    LeafSpaceGraph::ChartFrame frame;
    frame.transversal = chart->transversal;
    const auto& list = tv[chart->transversal];
    double h = form.spec.max_spacing();
    frame.lo = list[chart->first].first - h / 2;
    frame.hi = list[chart->last].first + h / 2;
    out.frames[eid] = frame;

    auto& chart_entries = out.charts[eid];
    std::set<int> seen;
    for (std::size_t q = chart->first; q <= chart->last; ++q) {
      int c = list[q].second;
      if (!seen.insert(c).second) continue;  // grid-scale re-crossing, first instance wins
      double tpar = (list[q].first - frame.lo) / (frame.hi - frame.lo);
      chart_entries.push_back({field.classes[c].id, tpar});
    }
  }
  std::sort(out.config.edges.begin(), out.config.edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });

  // classes of an edge missing from its chart: interpolate via transversals
  // shared with charted classes
  std::map<std::string, double> t_of_class;
  for (const auto& [eid, entries] : out.charts)
    for (const auto& e : entries) t_of_class[e.class_id] = e.t;
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t t = 0; t < tv.size(); ++t) {
      const auto& list = tv[t];
      for (std::size_t q = 0; q < list.size(); ++q) {
        int c = list[q].second;
        if (flagged[c] || t_of_class.count(field.classes[c].id)) continue;
        // nearest charted classmates on both sides along this transversal
        const std::string eid = edge_of(c);
        long lo = static_cast<long>(q) - 1, hi = static_cast<long>(q) + 1;
        while (lo >= 0 && (flagged[list[lo].second] || edge_of(list[lo].second) != eid ||
                           !t_of_class.count(field.classes[list[lo].second].id)))
          --lo;
        while (hi < static_cast<long>(list.size()) &&
               (flagged[list[hi].second] || edge_of(list[hi].second) != eid ||
                !t_of_class.count(field.classes[list[hi].second].id)))
          ++hi;
        bool has_lo = lo >= 0 && !flagged[list[lo].second] && edge_of(list[lo].second) == eid;
        bool has_hi = hi < static_cast<long>(list.size()) && !flagged[list[hi].second] &&
                      edge_of(list[hi].second) == eid;
        if (has_lo && has_hi) {
          double tl = t_of_class.at(field.classes[list[lo].second].id);
          double th = t_of_class.at(field.classes[list[hi].second].id);
          double w = (list[q].first - list[lo].first) / (list[hi].first - list[lo].first);
          t_of_class[field.classes[c].id] = tl + w * (th - tl);
        } else if (has_lo || has_hi) {
          double tn = t_of_class.at(
              field.classes[list[has_lo ? lo : hi].second].id);
          t_of_class[field.classes[c].id] = tn;  // no second anchor, inherit
        }
      }
    }
  }
  for (const auto& [cid, tpar] : t_of_class) {
    const std::string& eid = out.edge_of_class.at(cid);
    auto& entries = out.charts[eid];
    if (std::none_of(entries.begin(), entries.end(),
                     [&](const ChartEntry& e) { return e.class_id == cid; }))
      entries.push_back({cid, tpar});
  }
  for (auto& [eid, entries] : out.charts)
    std::sort(entries.begin(), entries.end(), [](const ChartEntry& a, const ChartEntry& b) {
      return a.t < b.t || (a.t == b.t && a.class_id < b.class_id);
    });

  // micro-edges: one per branching unit, joining its two adjacent edges;
  // instances at a transversal's very end see truncated neighbourhoods and
  // cast no votes
  const double end_margin = 2.0 * form.spec.max_spacing();
  std::map<int, std::set<std::string>> unit_adjacent;  // unit root -> adjacent edge ids
  std::map<int, std::string> unit_vertex;
  for (std::size_t t = 0; t < tv.size(); ++t) {
    const auto& list = tv[t];
    double tv_len = net.transversals[t].length();
    for (std::size_t q = 0; q < list.size(); ++q) {
      int c = list[q].second;
      if (!flagged[c]) continue;
      int u = unit_uf.find(c);
      unit_vertex[u] = vertex_of(c);
      if (list[q].first < end_margin || list[q].first > tv_len - end_margin) continue;
      // walk outward past the unit's own flagged companions
      for (int dir : {-1, +1}) {
        long p = static_cast<long>(q) + dir;
        while (p >= 0 && p < static_cast<long>(list.size()) && flagged[list[p].second] &&
               unit_uf.find(list[p].second) == u)
          p += dir;
        if (p < 0 || p >= static_cast<long>(list.size())) continue;
        if (flagged[list[p].second]) continue;  // touches another unit directly
        unit_adjacent[u].insert(edge_of(list[p].second));
      }
    }
  }
  for (const auto& [u, edges] : unit_adjacent) {
    if (endpoint_class[u]) continue;  // endpoints carry no micro-edges
    if (edges.size() != 2)
      throw AmbiguityError("non-Hausdorff unit " + field.classes[u].id + " limits onto " +
                           std::to_string(edges.size()) + " edges (expected 2); refine the grid");
    auto it = edges.begin();
    std::string ea = *it++;
    std::string eb = *it;
    std::string vid = unit_vertex.at(u);
    auto& micros = out.config.micrographs[vid];
    micros.push_back({"s" + std::to_string(micros.size()) + "_" + vid, {ea, eb}});
  }

  return out;
}

bool cylinder_fastpath(const SampledOneForm& form, double ratio_cap) {
  if (form.spec.dim != 2) return false;
  for (std::size_t i = 0; i < form.spec.node_count(); ++i)
    if (!form.inside(i)) return false;  // theorem needs the full cylinder
  for (std::size_t i = 0; i < form.spec.node_count(); ++i) {
    double g = form.components[0][i], h = form.components[1][i];
    if (h == 0) return false;
    if (std::fabs(g / h) > ratio_cap) return false;
  }
  return true;
}

GraphicalConfiguration single_edge_configuration() {
  GraphicalConfiguration config;
  config.edges.push_back({"e0", {open_end(), open_end()}});
  return config;
}

}  // namespace foliagraph
