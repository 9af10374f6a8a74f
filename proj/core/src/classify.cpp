#include "foliagraph/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <limits>
#include <numeric>
#include <thread>

namespace foliagraph {

namespace {

int env_threads(int requested) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("FOLIAGRAPH_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) hw = std::min(hw, cap);
  }
  return hw;
}

struct SpatialHash {
  double cell;
  std::map<std::pair<long, long>, std::vector<int>> buckets;

  explicit SpatialHash(double cell_size) : cell(cell_size) {}
  std::pair<long, long> key(Vec2 p) const {
    return {static_cast<long>(std::floor(p.x / cell)), static_cast<long>(std::floor(p.y / cell))};
  }
  void insert(Vec2 p, int idx) { buckets[key(p)].push_back(idx); }
  template <class F>
  void near(Vec2 p, F&& fn) const {
    auto [ki, kj] = key(p);
    for (long dj = -1; dj <= 1; ++dj)
      for (long di = -1; di <= 1; ++di) {
        auto it = buckets.find({ki + di, kj + dj});
        if (it == buckets.end()) continue;
        for (int idx : it->second) fn(idx);
      }
  }
};

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

namespace {

// Potential of the form integrated over the grid graph (trapezoidal, BFS per
// component). For closed forms this is a global primitive, so its level sets
// are the leaves; sampling transversals at aligned potential values then
// samples the same leaves on every transversal.
std::vector<double> form_potential(const SampledOneForm& form) {
  const GridSpec& s = form.spec;
  std::vector<double> pot(s.node_count(), std::numeric_limits<double>::quiet_NaN());
  std::deque<std::size_t> queue;
  for (std::size_t root = 0; root < s.node_count(); ++root) {
    if (!form.inside(root) || !std::isnan(pot[root])) continue;
    pot[root] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      int i = static_cast<int>(cur % s.n[0]);
      int j = static_cast<int>(cur / s.n[0]);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        int ni = i + di[d], nj = j + dj[d];
        if (ni < 0 || nj < 0 || ni >= s.n[0] || nj >= s.n[1]) continue;
        std::size_t nb = s.index(ni, nj);
        if (!form.inside(nb) || !std::isnan(pot[nb])) continue;
        double step = di[d] ? s.spacing(0) * di[d] : s.spacing(1) * dj[d];
        double mid_g = (form.components[0][cur] + form.components[0][nb]) / 2;
        double mid_h = (form.components[1][cur] + form.components[1][nb]) / 2;
        pot[nb] = pot[cur] + (di[d] ? mid_g : mid_h) * step;
        queue.push_back(nb);
      }
    }
  }
  return pot;
}

double interp_potential(const SampledOneForm& form, const std::vector<double>& pot, Vec2 p) {
  const GridSpec& s = form.spec;
  double fx = (p.x - s.lo[0]) / s.spacing(0);
  double fy = (p.y - s.lo[1]) / s.spacing(1);
  int i = static_cast<int>(std::floor(fx));
  int j = static_cast<int>(std::floor(fy));
  if (i < 0 || j < 0 || i + 1 >= s.n[0] || j + 1 >= s.n[1]) return std::nan("");
  double u = fx - i, v = fy - j;
  double c00 = pot[s.index(i, j)], c10 = pot[s.index(i + 1, j)];
  double c01 = pot[s.index(i, j + 1)], c11 = pot[s.index(i + 1, j + 1)];
  if (std::isnan(c00) || std::isnan(c10) || std::isnan(c01) || std::isnan(c11)) return std::nan("");
  return c00 * (1 - u) * (1 - v) + c10 * u * (1 - v) + c01 * (1 - u) * v + c11 * u * v;
}

}  // namespace

LeafField classify_leaves(const TransversalNet& net, const SampledOneForm& form,
                          const ClassifyOptions& opts) {
  LeafField field;
  const double h = form.spec.max_spacing();
  const double tube = opts.tube_factor * h;
  const double cos_tol = std::cos(opts.angle_deg * M_PI / 180.0);

  // sampling quantum: one grid spacing in the |omega| metric
  std::vector<double> mags;
  for (std::size_t i = 0; i < form.spec.node_count(); ++i)
    if (form.inside(i)) mags.push_back(form.norm_at(i));
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  double median_mag = mags.empty() ? 1.0 : std::max(mags[mags.size() / 2], 1e-12);
  const double delta = opts.sample_factor * h * median_mag;

  std::vector<double> pot = form_potential(form);

  // seeds: transversal endpoints, crossings of aligned potential levels, and
  // local potential extrema (these catch the leaves where the form is small,
  // the candidates for branching)
  for (std::size_t t = 0; t < net.transversals.size(); ++t) {
    const Transversal& tv = net.transversals[t];
    if (tv.length() < 6 * h) continue;  // coverage stubs carry no usable samples
    // endpoint seeds only where the curve ran out of the box; ends stopped by
    // a mask sit in the sub-grid band next to it, which stays unsampled
    std::vector<double> params;
    if (!tv.end_at_mask[0]) params.push_back(0.0);
    if (!tv.end_at_mask[1]) params.push_back(tv.length());
    std::vector<double> pvals(tv.pts.size());
    for (std::size_t k = 0; k < tv.pts.size(); ++k) pvals[k] = interp_potential(form, pot, tv.pts[k]);
    for (std::size_t k = 0; k + 1 < tv.pts.size(); ++k) {
      double p0 = pvals[k], p1 = pvals[k + 1];
      if (std::isnan(p0) || std::isnan(p1) || p0 == p1) continue;
      double klo = std::ceil(std::min(p0, p1) / delta);
      double khi = std::floor(std::max(p0, p1) / delta);
      for (double kk = klo; kk <= khi; ++kk) {
        double w = (kk * delta - p0) / (p1 - p0);
        if (w < 0 || w > 1) continue;
        params.push_back(tv.arc[k] + w * (tv.arc[k + 1] - tv.arc[k]));
      }
    }
    for (std::size_t k = 1; k + 1 < tv.pts.size(); ++k) {
      if (std::isnan(pvals[k - 1]) || std::isnan(pvals[k]) || std::isnan(pvals[k + 1])) continue;
      bool min_pt = pvals[k] < pvals[k - 1] && pvals[k] <= pvals[k + 1];
      bool max_pt = pvals[k] > pvals[k - 1] && pvals[k] >= pvals[k + 1];
      if (min_pt || max_pt) params.push_back(tv.arc[k]);
    }
    std::sort(params.begin(), params.end());
    double last = -1e300;
    for (double s : params) {
      if (s - last < h / 4) continue;  // dedupe coincident candidates
      Vec2 p = tv.at(s);
      Vec2 w;
      if (!sample_field(form, p, {0, 0}, w)) continue;
      if (w.norm() == 0) continue;
      last = s;
      Vec2 dir{-w.y, w.x};
      dir = (1.0 / dir.norm()) * dir;
      field.seed_intercept.push_back({static_cast<int>(t), s, static_cast<int>(field.seed_pos.size())});
      field.seed_pos.push_back(p);
      field.seed_dir.push_back(dir);
    }
  }

  const std::size_t n_seeds = field.seed_pos.size();
  field.traces.resize(n_seeds);

  // tracing is independent per seed; results land at fixed indices so the
  // outcome matches a sequential run
  int n_threads = env_threads(opts.threads);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) field.traces[i] = trace_leaf(form, field.seed_pos[i], opts.trace);
  };
  if (n_threads <= 1 || n_seeds < 64) {
    work(0, n_seeds);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n_seeds + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      std::size_t lo = t * chunk, hi = std::min(n_seeds, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  SpatialHash hash(std::max(tube, 1e-12));
  for (std::size_t i = 0; i < n_seeds; ++i) hash.insert(field.seed_pos[i], static_cast<int>(i));

  UnionFind uf(n_seeds);
  for (std::size_t i = 0; i < n_seeds; ++i) {
    const auto& pts = field.traces[i].pts;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      Vec2 seg = pts[k + 1] - pts[k];
      double seg_len = seg.norm();
      if (seg_len == 0) continue;
      Vec2 dir = (1.0 / seg_len) * seg;
      hash.near(pts[k], [&](int other) {
        if (uf.find(static_cast<int>(i)) == uf.find(other)) return;
        Vec2 d = field.seed_pos[other] - pts[k];
        if (d.norm() >= tube) return;
        if (std::fabs(dir.dot(field.seed_dir[other])) < cos_tol) return;  // line angle
        uf.unite(static_cast<int>(i), other);
      });
    }
  }

  field.class_of_seed.assign(n_seeds, -1);
  std::map<int, int> class_of_root;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    int r = uf.find(static_cast<int>(i));
    auto it = class_of_root.find(r);
    if (it == class_of_root.end()) {
      int id = static_cast<int>(field.classes.size());
      class_of_root[r] = id;
      LeafClass cl;
      cl.id = "c" + std::to_string(id);
      field.classes.push_back(cl);
      it = class_of_root.find(r);
    }
    int cid = it->second;
    field.class_of_seed[i] = cid;
    LeafClass& cl = field.classes[cid];
    cl.seeds.push_back(static_cast<int>(i));
    cl.intercepts.push_back(field.seed_intercept[i]);
    cl.closed = cl.closed || field.traces[i].closed;
    cl.touches_mask = cl.touches_mask || field.traces[i].hit_mask;
    cl.touches_boundary = cl.touches_boundary || field.traces[i].hit_boundary;
    if (cl.representative < 0 || field.traces[i].length > field.traces[cl.representative].length)
      cl.representative = static_cast<int>(i);
  }
  for (auto& cl : field.classes) std::sort(cl.intercepts.begin(), cl.intercepts.end());
  return field;
}

namespace {

// |omega| integrated along a transversal between two arclength positions
double transversal_integral(const Transversal& tv, const SampledOneForm& form, double s0, double s1) {
  if (s1 < s0) std::swap(s0, s1);
  double total = 0;
  double step = form.spec.max_spacing() / 2;
  int n = std::max(1, static_cast<int>(std::ceil((s1 - s0) / step)));
  Vec2 prev = tv.at(s0);
  for (int k = 1; k <= n; ++k) {
    Vec2 cur = tv.at(s0 + (s1 - s0) * k / n);
    Vec2 mid = 0.5 * (prev + cur);
    Vec2 w;
    if (sample_field(form, mid, {0, 0}, w)) total += w.norm() * (cur - prev).norm();
    prev = cur;
  }
  return total;
}

// |omega(tangent)| integrated along a leaf polyline between the points
// nearest to a and b; near zero by construction, kept for honesty
double leaf_integral(const std::vector<Vec2>& pts, const SampledOneForm& form, Vec2 a, Vec2 b) {
  if (pts.size() < 2) return 0;
  std::size_t ia = 0, ib = 0;
  double da = 1e300, db = 1e300;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double va = (pts[k] - a).norm(), vb = (pts[k] - b).norm();
    if (va < da) { da = va; ia = k; }
    if (vb < db) { db = vb; ib = k; }
  }
  if (ib < ia) std::swap(ia, ib);
  double total = 0;
  for (std::size_t k = ia; k < ib; ++k) {
    Vec2 seg = pts[k + 1] - pts[k];
    Vec2 w;
    if (sample_field(form, pts[k], {0, 0}, w)) total += std::fabs(w.dot(seg));
  }
  return total;
}

struct TvIndex {
  // per transversal: intercepts sorted by param, with class ids
  std::vector<std::vector<std::pair<double, int>>> items;  // (param, class)
};

TvIndex index_net(const LeafField& field, std::size_t n_tv) {
  TvIndex idx;
  idx.items.resize(n_tv);
  for (std::size_t c = 0; c < field.classes.size(); ++c)
    for (const auto& ic : field.classes[c].intercepts)
      idx.items[ic.transversal].push_back({ic.param, static_cast<int>(c)});
  for (auto& v : idx.items) std::sort(v.begin(), v.end());
  return idx;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> detect_inseparable(const LeafField& field,
                                                                    const TransversalNet& net,
                                                                    const SampledOneForm& form,
                                                                    const DetectOptions& opts) {
  TvIndex idx = index_net(field, net.transversals.size());
  // directed candidates; a pair is kept only when confirmed from both sides,
  // which discards off-phase stragglers sitting inside a family
  std::set<std::pair<int, int>> found;

  // a transversal embeds injectively into the leaf space and separates its
  // own points, so two classes crossing a common transversal are separable
  std::vector<std::set<int>> tv_of_class(field.classes.size());
  for (std::size_t c = 0; c < field.classes.size(); ++c)
    for (const auto& ic : field.classes[c].intercepts) tv_of_class[c].insert(ic.transversal);
  auto share_transversal = [&](int a, int b) {
    const auto& sa = tv_of_class[a];
    const auto& sb = tv_of_class[b];
    for (int t : sa)
      if (sb.count(t)) return true;
    return false;
  };

  const int A = opts.approach;
  const double end_margin = 2.0 * form.spec.max_spacing();
  // an intercept sitting at a transversal's very end cannot witness a limit:
  // the family there is cut off by the domain, not converging to a leaf
  auto limitable = [&](std::size_t tv, double param) {
    const Transversal& T = net.transversals[tv];
    return param > end_margin && param < T.length() - end_margin;
  };
  for (std::size_t t = 0; t < idx.items.size(); ++t) {
    const auto& list = idx.items[t];
    for (std::size_t pos = 0; pos < list.size(); ++pos) {
      int f_class = list[pos].second;
      double t_star = list[pos].first;
      if (!limitable(t, t_star)) continue;
      for (int dir : {-1, +1}) {
        // nearest A distinct classes on this side that also hit some other
        // transversal; gathered lazily per candidate transversal below
        std::vector<int> side_classes;
        std::vector<double> side_params;
        for (long q = static_cast<long>(pos) + dir; q >= 0 && q < static_cast<long>(list.size());
             q += dir) {
          int c = list[q].second;
          if (c == f_class) continue;
          if (std::find(side_classes.begin(), side_classes.end(), c) != side_classes.end()) continue;
          side_classes.push_back(c);
          side_params.push_back(list[q].first);
          if (static_cast<int>(side_classes.size()) >= 4 * A) break;
        }
        if (side_classes.empty()) continue;

        for (std::size_t b = 0; b < idx.items.size(); ++b) {
          if (b == t) continue;
          // members of the approaching family that also intercept b
          std::vector<int> cls;
          std::vector<double> pa, pb;
          for (std::size_t q = 0; q < side_classes.size() && static_cast<int>(cls.size()) < A; ++q) {
            int c = side_classes[q];
            const auto& ics = field.classes[c].intercepts;
            // nearest instance on b, if any
            double best = 0;
            bool has = false;
            for (const auto& ic : ics) {
              if (ic.transversal != static_cast<int>(b)) continue;
              if (!has || (cls.empty() ? true
                                       : std::fabs(ic.param - pb.back()) < std::fabs(best - pb.back()))) {
                best = ic.param;
                has = true;
              }
            }
            if (!has) continue;
            cls.push_back(c);
            pa.push_back(side_params[q]);
            pb.push_back(best);
          }
          if (static_cast<int>(cls.size()) < A) continue;
          // monotone approach on b
          double step1 = pb[1] - pb[0], step2 = pb[2] - pb[1];
          if (step1 == 0 || step2 == 0 || (step1 > 0) != (step2 > 0)) continue;

          // limit on b: immediate neighbour of pb[0] opposite the family
          const auto& blist = idx.items[b];
          auto it = std::lower_bound(
              blist.begin(), blist.end(), std::make_pair(pb[0], cls[0]),
              [](const std::pair<double, int>& x, const std::pair<double, int>& y) { return x < y; });
          long bp = it - blist.begin();
          while (bp < static_cast<long>(blist.size()) && blist[bp].second != cls[0]) ++bp;
          if (bp >= static_cast<long>(blist.size())) continue;
          int away = step1 > 0 ? -1 : +1;  // family walks away in +-, limit is the other way
          long lim = bp + away;
          // skip further instances of the approaching classes
          while (lim >= 0 && lim < static_cast<long>(blist.size()) &&
                 std::find(cls.begin(), cls.end(), blist[lim].second) != cls.end())
            lim += away;
          if (lim < 0 || lim >= static_cast<long>(blist.size())) continue;
          int f_prime = blist[lim].second;
          double s_star = blist[lim].first;
          if (f_prime == f_class) continue;  // interior point of a chart, not a branching
          if (!limitable(b, s_star)) continue;
          if (share_transversal(f_class, f_prime)) continue;

          // normal-path integrals must contract toward the limit
          double I[3];
          bool usable = true;
          for (int k = 0; k < 3; ++k) {
            const LeafClass& cl = field.classes[cls[k]];
            const auto& rep = field.traces[cl.representative].pts;
            double ia = transversal_integral(net.transversals[t], form, t_star, pa[k]);
            double ib = transversal_integral(net.transversals[b], form, pb[k], s_star);
            double il = leaf_integral(rep, form, net.transversals[t].at(pa[k]),
                                      net.transversals[b].at(pb[k]));
            I[k] = ia + ib + il;
            if (!(I[k] > 0)) usable = false;
          }
          if (!usable) continue;
          if (I[0] < opts.decrease_ratio * I[1] && I[1] < opts.decrease_ratio * I[2])
            found.insert({f_class, f_prime});
        }
      }
    }
  }

  std::vector<std::pair<std::string, std::string>> out;
  for (auto [a, b] : found) {
    if (a >= b) continue;
    if (!found.count({b, a})) continue;
    out.push_back({field.classes[a].id, field.classes[b].id});
  }
  return out;
}

std::vector<std::string> detect_endpoints(const LeafField& field, const TransversalNet& net) {
  TvIndex idx = index_net(field, net.transversals.size());
  std::vector<std::string> out;
  for (std::size_t c = 0; c < field.classes.size(); ++c) {
    const LeafClass& cl = field.classes[c];
    if (cl.touches_mask || cl.touches_boundary) continue;  // artifact guard
    if (cl.intercepts.empty()) continue;
    bool endpoint = true;
    for (const auto& ic : cl.intercepts) {
      const auto& list = idx.items[ic.transversal];
      // the class's parameter must be a strict one-sided extreme
      bool below = false, above = false;
      for (const auto& [param, other] : list) {
        if (other == static_cast<int>(c)) continue;
        if (param < ic.param) below = true;
        if (param > ic.param) above = true;
      }
      if (below == above) {  // interior (both) or isolated (neither)
        endpoint = false;
        break;
      }
    }
    if (endpoint) out.push_back(cl.id);
  }
  return out;
}

}  // namespace foliagraph
