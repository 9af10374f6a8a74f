#include "foliagraph/trace.hpp"

#include <algorithm>
#include <cmath>

namespace foliagraph {

bool sample_field(const SampledOneForm& form, Vec2 p, Vec2 ref, Vec2& out) {
  const GridSpec& s = form.spec;
  double fx = (p.x - s.lo[0]) / s.spacing(0);
  double fy = (p.y - s.lo[1]) / s.spacing(1);
  int i = static_cast<int>(std::floor(fx));
  int j = static_cast<int>(std::floor(fy));
  if (i < 0 || j < 0 || i + 1 >= s.n[0] || j + 1 >= s.n[1]) return false;
  double u = fx - i, v = fy - j;

  Vec2 corners[4];
  double weights[4] = {(1 - u) * (1 - v), u * (1 - v), (1 - u) * v, u * v};
  int di[4] = {0, 1, 0, 1}, dj[4] = {0, 0, 1, 1};
  for (int c = 0; c < 4; ++c) {
    if (!form.inside(i + di[c], j + dj[c])) return false;
    corners[c] = {form.comp(0, i + di[c], j + dj[c]), form.comp(1, i + di[c], j + dj[c])};
  }
  if (ref.norm() == 0) ref = corners[0];
  out = {0, 0};
  for (int c = 0; c < 4; ++c) {
    double sgn = corners[c].dot(ref) < 0 ? -1.0 : 1.0;
    out = out + (weights[c] * sgn) * corners[c];
  }
  return true;
}

namespace {

// unit direction of the rotated (leaf) or raw (normal) field with sign
// continuation against `ref_dir`
bool unit_dir(const SampledOneForm& form, Vec2 p, Vec2 ref_dir, bool rotate, Vec2& out) {
  // reference back in component space
  Vec2 ref_field = rotate ? Vec2{ref_dir.y, -ref_dir.x} : ref_dir;
  Vec2 w;
  if (!sample_field(form, p, ref_field, w)) return false;
  Vec2 dir = rotate ? Vec2{-w.y, w.x} : w;
  double n = dir.norm();
  if (n < 1e-300) return false;
  dir = (1.0 / n) * dir;
  if (ref_dir.norm() > 0 && dir.dot(ref_dir) < 0) dir = -1.0 * dir;
  out = dir;
  return true;
}

// one RK4 step; false when the curve leaves the domain
bool rk4_step(const SampledOneForm& form, Vec2& p, Vec2& dir, double step, bool rotate) {
  Vec2 k1, k2, k3, k4;
  if (!unit_dir(form, p, dir, rotate, k1)) return false;
  if (!unit_dir(form, p + (step / 2) * k1, k1, rotate, k2)) return false;
  if (!unit_dir(form, p + (step / 2) * k2, k2, rotate, k3)) return false;
  if (!unit_dir(form, p + step * k3, k3, rotate, k4)) return false;
  Vec2 d = (1.0 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  p = p + step * d;
  dir = k4;
  return true;
}

LeafTrace trace_curve(const SampledOneForm& form, Vec2 seed, const TraceOptions& opts, bool rotate) {
  const GridSpec& s = form.spec;
  double h = s.max_spacing();
  double step = opts.step_factor * h;
  double diam = std::hypot(s.hi[0] - s.lo[0], s.hi[1] - s.lo[1]);
  double cap = opts.cap_diameters * diam;
  double close_tol = opts.close_factor * h;

  LeafTrace tr;
  Vec2 dir0;
  if (!unit_dir(form, seed, {0, 0}, rotate, dir0))
    throw StepFailureError("field not evaluable at seed");

  auto mark_stop = [&](Vec2 p, int end) {
    // stopped inside the box means a masked cell, otherwise the boundary
    if (p.x - 2 * step > s.lo[0] && p.x + 2 * step < s.hi[0] && p.y - 2 * step > s.lo[1] &&
        p.y + 2 * step < s.hi[1]) {
      tr.hit_mask = true;
      tr.end_at_mask[end] = true;
    } else {
      tr.hit_boundary = true;
    }
  };

  std::vector<Vec2> fwd{seed}, bwd;
  // forward
  {
    Vec2 p = seed, dir = dir0;
    double len = 0;
    bool escaped = false;
    while (len < cap) {
      Vec2 prev = p;
      if (!rk4_step(form, p, dir, step, rotate)) {
        mark_stop(prev, 1);
        break;
      }
      len += (p - prev).norm();
      fwd.push_back(p);
      double d_seed = (p - seed).norm();
      if (d_seed > 4 * close_tol) escaped = true;
      if (escaped && d_seed < close_tol && dir.dot(dir0) > std::cos(15.0 * M_PI / 180.0)) {
        tr.closed = true;
        break;
      }
    }
    tr.length += len;
  }
  if (!tr.closed) {
    Vec2 p = seed, dir = -1.0 * dir0;
    double len = 0;
    while (len < cap) {
      Vec2 prev = p;
      if (!rk4_step(form, p, dir, step, rotate)) {
        mark_stop(prev, 0);
        break;
      }
      len += (p - prev).norm();
      bwd.push_back(p);
    }
    tr.length += len;
  }

  tr.pts.reserve(bwd.size() + fwd.size());
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) tr.pts.push_back(*it);
  for (const auto& p : fwd) tr.pts.push_back(p);
  return tr;
}

}  // namespace

LeafTrace trace_leaf(const SampledOneForm& form, Vec2 seed, const TraceOptions& opts) {
  return trace_curve(form, seed, opts, true);
}

LeafTrace trace_normal(const SampledOneForm& form, Vec2 seed, const TraceOptions& opts) {
  return trace_curve(form, seed, opts, false);
}

Vec2 Transversal::at(double s) const {
  if (pts.empty()) return {0, 0};
  if (s <= 0) return pts.front();
  if (s >= arc.back()) return pts.back();
  auto it = std::upper_bound(arc.begin(), arc.end(), s);
  std::size_t i = it - arc.begin();
  double t = (s - arc[i - 1]) / (arc[i] - arc[i - 1]);
  return pts[i - 1] + t * (pts[i] - pts[i - 1]);
}

TransversalNet build_transversal_net(const SampledOneForm& form, const NetOptions& opts) {
  const GridSpec& s = form.spec;
  if (s.dim != 2) throw DimensionError("transversal nets are built for planar forms only");
  double h = s.max_spacing();
  double radius = opts.coverage_factor * h;

  TransversalNet net;
  net.coverage_radius = radius;

  // domain cells (all four corner nodes unmasked), coverage bitmap over them
  int cx = s.n[0] - 1, cy = s.n[1] - 1;
  std::vector<std::uint8_t> is_domain(std::size_t(cx) * cy, 0), covered(std::size_t(cx) * cy, 0);
  for (int j = 0; j < cy; ++j)
    for (int i = 0; i < cx; ++i)
      is_domain[std::size_t(j) * cx + i] =
          form.inside(i, j) && form.inside(i + 1, j) && form.inside(i, j + 1) && form.inside(i + 1, j + 1);

  auto cell_center = [&](int i, int j) {
    return Vec2{s.lo[0] + (i + 0.5) * s.spacing(0), s.lo[1] + (j + 0.5) * s.spacing(1)};
  };
  auto mark_covered = [&](const Transversal& t) {
    int ri = static_cast<int>(std::ceil(radius / s.spacing(0))) + 1;
    int rj = static_cast<int>(std::ceil(radius / s.spacing(1))) + 1;
    for (const auto& p : t.pts) {
      int ci = static_cast<int>(std::floor((p.x - s.lo[0]) / s.spacing(0)));
      int cj = static_cast<int>(std::floor((p.y - s.lo[1]) / s.spacing(1)));
      for (int j = std::max(0, cj - rj); j <= std::min(cy - 1, cj + rj); ++j)
        for (int i = std::max(0, ci - ri); i <= std::min(cx - 1, ci + ri); ++i) {
          if (covered[std::size_t(j) * cx + i]) continue;
          Vec2 c = cell_center(i, j);
          if ((c - p).norm() <= radius) covered[std::size_t(j) * cx + i] = 1;
        }
    }
  };

  auto try_seed = [&](Vec2 p) {
    Vec2 probe;
    if (!sample_field(form, p, {0, 0}, probe)) return;
    LeafTrace tr = trace_normal(form, p, opts.trace);
    if (tr.pts.size() < 2) return;
    Transversal t;
    t.end_at_mask[0] = tr.end_at_mask[0];
    t.end_at_mask[1] = tr.end_at_mask[1];
    t.pts = std::move(tr.pts);
    t.arc.resize(t.pts.size());
    t.arc[0] = 0;
    for (std::size_t i = 1; i < t.pts.size(); ++i)
      t.arc[i] = t.arc[i - 1] + (t.pts[i] - t.pts[i - 1]).norm();
    mark_covered(t);
    net.transversals.push_back(std::move(t));
  };

  auto cell_covered = [&](Vec2 p) {
    int ci = static_cast<int>(std::floor((p.x - s.lo[0]) / s.spacing(0)));
    int cj = static_cast<int>(std::floor((p.y - s.lo[1]) / s.spacing(1)));
    if (ci < 0 || cj < 0 || ci >= cx || cj >= cy) return true;
    return covered[std::size_t(cj) * cx + ci] != 0;
  };

  // coarse lattice pass, then a fill pass from any still-uncovered cell
  int stride = std::max(1, static_cast<int>(std::lround(opts.seed_spacing_factor)));
  for (int j = stride / 2; j < cy; j += stride)
    for (int i = stride / 2; i < cx; i += stride) {
      if (!is_domain[std::size_t(j) * cx + i]) continue;
      Vec2 c = cell_center(i, j);
      if (!cell_covered(c)) try_seed(c);
    }
  for (int j = 0; j < cy; ++j)
    for (int i = 0; i < cx; ++i) {
      if (!is_domain[std::size_t(j) * cx + i] || covered[std::size_t(j) * cx + i]) continue;
      try_seed(cell_center(i, j));
    }

  std::vector<std::pair<int, int>> uncovered;
  for (int j = 0; j < cy; ++j)
    for (int i = 0; i < cx; ++i)
      if (is_domain[std::size_t(j) * cx + i] && !covered[std::size_t(j) * cx + i])
        uncovered.push_back({i, j});
  if (!uncovered.empty())
    throw CoverageError("transversal net failed to cover " + std::to_string(uncovered.size()) +
                        " cells (first at " + std::to_string(uncovered[0].first) + "," +
                        std::to_string(uncovered[0].second) + ")");
  return net;
}

}  // namespace foliagraph
