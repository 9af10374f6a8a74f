#include "foliagraph/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace foliagraph {

namespace {

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3 - 2 * t);
}

struct EdgeWindow {
  double lo = 0, hi = 1;
  bool flip = false;  // chart parameter runs head-to-tail
};

}  // namespace

ScalarGrid build_f(const LeafSpaceGraph& graph, const EulerianCertificate& cert,
                   const LeafField& field, const SampledOneForm& form, const BuildFOptions& opts) {
  const GraphicalConfiguration& config = graph.config;

  // level window per edge; open ends get a unit budget beyond the epsilon
  std::map<std::string, EdgeWindow> windows;
  for (const auto& e : config.edges) {
    if (!cert.orientation.has(e.id)) throw NotEulerianError("certificate misses edge " + e.id);
    const EdgeEnd& tail = cert.orientation.tail(e.id);
    const EdgeEnd& head = cert.orientation.head(e.id);
    EdgeWindow w;
    if (tail.open() && head.open()) {
      w.lo = 0;
      w.hi = 1;
    } else if (tail.open()) {
      double a = static_cast<double>(cert.levels.at(head.name()));
      double eps = cert.epsilons.at(head.name());
      w.lo = a - eps - 1;
      w.hi = a - eps;
    } else if (head.open()) {
      double a = static_cast<double>(cert.levels.at(tail.name()));
      double eps = cert.epsilons.at(tail.name());
      w.lo = a + eps;
      w.hi = a + eps + 1;
    } else {
      double at = static_cast<double>(cert.levels.at(tail.name()));
      double ah = static_cast<double>(cert.levels.at(head.name()));
      w.lo = at + cert.epsilons.at(tail.name());
      w.hi = ah - cert.epsilons.at(head.name());
    }
    // chart parameter may run against the orientation: t=0 must sit at the tail
    w.flip = cert.orientation.dir.at(e.id)[0] == e.ends[1] &&
             !(e.ends[0] == e.ends[1]);
    windows[e.id] = w;
  }

  // f per class
  std::map<std::string, double> f_of_class;
  for (const auto& [cid, vid] : graph.vertex_of_class)
    f_of_class[cid] = static_cast<double>(cert.levels.at(vid));
  for (const auto& [eid, entries] : graph.charts) {
    const EdgeWindow& w = windows.at(eid);
    for (const auto& entry : entries) {
      // smoothstep onto the window; its flat ends blend C1 into the vertex
      // levels that the branching classes carry
      double t = w.flip ? 1 - entry.t : entry.t;
      f_of_class[entry.class_id] = w.lo + (w.hi - w.lo) * smoothstep(t);
    }
  }

  // extend the chart window to the vertex value at the extremes: classes at
  // t -> 0 read lo, which differs from the tail vertex level a(tail) by eps;
  // the branching classes themselves carry a(tail) exactly, so node values
  // stay strictly monotone across the vertex
  ScalarGrid f;
  f.spec = form.spec;
  f.values.assign(form.spec.node_count(), std::nan(""));

  // spatial hash over every trace point -> (point, local leaf direction,
  // class); the matching metric discounts displacement along the leaf so a
  // node matches the leaf passing beside it, not the one ending nearby
  struct HashedPoint {
    Vec2 p;
    Vec2 dir;
    int cls;
  };
  const double tube = opts.assign_tube_factor * form.spec.max_spacing();
  std::map<std::pair<long, long>, std::vector<HashedPoint>> hash;
  auto key = [&](Vec2 p) {
    return std::make_pair(static_cast<long>(std::floor(p.x / tube)),
                          static_cast<long>(std::floor(p.y / tube)));
  };
  for (std::size_t s = 0; s < field.traces.size(); ++s) {
    int cls = field.class_of_seed[s];
    const auto& pts = field.traces[s].pts;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Vec2 d = k + 1 < pts.size() ? pts[k + 1] - pts[k] : (k > 0 ? pts[k] - pts[k - 1] : Vec2{});
      double n = d.norm();
      if (n > 0) d = (1.0 / n) * d;
      hash[key(pts[k])].push_back({pts[k], d, cls});
    }
  }

  const GridSpec& spec = form.spec;
  for (int j = 0; j < spec.n[1]; ++j)
    for (int i = 0; i < spec.n[0]; ++i) {
      if (!form.inside(i, j)) continue;
      Vec2 p{spec.coord(0, i), spec.coord(1, j)};
      auto [ki, kj] = key(p);
      int best_class = -1;
      // widen the search for unsampled slivers (box corners) before failing
      for (long ring = 1; ring <= 4 && best_class < 0; ++ring) {
        double best_d = ring * tube;
        for (long dj = -ring; dj <= ring; ++dj)
          for (long di = -ring; di <= ring; ++di) {
            auto it = hash.find({ki + di, kj + dj});
            if (it == hash.end()) continue;
            for (const auto& hp : it->second) {
              Vec2 r = p - hp.p;
              double along = r.dot(hp.dir);
              double perp2 = r.dot(r) - along * along;
              double d = std::sqrt(std::max(0.0, perp2) + 0.01 * along * along);
              if (d < best_d) {
                best_d = d;
                best_class = hp.cls;
              }
            }
          }
      }
      if (best_class < 0)
        throw ChartGapError("no traced leaf near node " + std::to_string(i) + "," +
                            std::to_string(j));
      auto it = f_of_class.find(field.classes[best_class].id);
      if (it == f_of_class.end())
        throw ChartGapError("class " + field.classes[best_class].id + " has no chart parameter");
      f.at(i, j) = it->second;
    }
  return f;
}

MultiplierResult compute_lambda(const ScalarGrid& f, const SampledOneForm& form) {
  MultiplierResult res;
  res.f = f;
  res.lambda.spec = form.spec;
  res.lambda.values.assign(form.spec.node_count(), std::nan(""));

  const GridSpec& s = form.spec;
  res.report.min_abs_grad_f = 1e300;
  res.report.min_abs_lambda = 1e300;
  res.report.max_rel_residual = 0;

  auto fdiff = [&](int axis, int i, int j) -> double {
    int di = axis == 0 ? 1 : 0, dj = axis == 1 ? 1 : 0;
    double h = s.spacing(axis);
    bool has_p = i + di < s.n[0] && j + dj < s.n[1] && form.inside(i + di, j + dj) &&
                 !std::isnan(f.at(i + di, j + dj));
    bool has_m = i - di >= 0 && j - dj >= 0 && form.inside(i - di, j - dj) &&
                 !std::isnan(f.at(i - di, j - dj));
    if (has_p && has_m) return (f.at(i + di, j + dj) - f.at(i - di, j - dj)) / (2 * h);
    if (has_p) return (f.at(i + di, j + dj) - f.at(i, j)) / h;
    if (has_m) return (f.at(i, j) - f.at(i - di, j - dj)) / h;
    return std::nan("");
  };

  for (int j = 0; j < s.n[1]; ++j)
    for (int i = 0; i < s.n[0]; ++i) {
      if (!form.inside(i, j) || std::isnan(f.at(i, j))) continue;
      double fx = fdiff(0, i, j), fy = fdiff(1, i, j);
      if (std::isnan(fx) || std::isnan(fy)) continue;
      double g = form.comp(0, i, j), h = form.comp(1, i, j);
      double denom = g * g + h * h;
      double lam = (fx * g + fy * h) / denom;
      res.lambda.at(i, j) = lam;
      double grad = std::hypot(fx, fy);
      double rx = fx - lam * g, ry = fy - lam * h;
      double rel = std::hypot(rx, ry) / std::max(1.0, grad);
      res.report.min_abs_grad_f = std::min(res.report.min_abs_grad_f, grad);
      res.report.min_abs_lambda = std::min(res.report.min_abs_lambda, std::fabs(lam));
      res.report.max_rel_residual = std::max(res.report.max_rel_residual, rel);
    }
  return res;
}

VerifyReport verify(const MultiplierResult& result, const VerifyOptions& opts) {
  VerifyReport rep;
  const MultiplierReport& r = result.report;
  if (!(r.min_abs_grad_f > 0)) {
    rep.worst = "df vanishes somewhere (min |grad f| = " + std::to_string(r.min_abs_grad_f) + ")";
    return rep;
  }
  if (!(r.min_abs_lambda > 0)) {
    rep.worst = "lambda vanishes somewhere (min |lambda| = " + std::to_string(r.min_abs_lambda) + ")";
    return rep;
  }
  if (!(r.max_rel_residual < opts.residual_threshold)) {
    rep.worst = "df = lambda*omega residual too large (" + std::to_string(r.max_rel_residual) + ")";
    return rep;
  }
  rep.pass = true;
  return rep;
}

}  // namespace foliagraph
