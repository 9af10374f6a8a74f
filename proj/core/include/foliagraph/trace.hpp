#pragma once

#include <cmath>
#include <vector>

#include "foliagraph/grid.hpp"

namespace foliagraph {

struct Vec2 {
  double x = 0, y = 0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

struct TraceOptions {
  double step_factor = 0.5;       // RK4 step = factor * max spacing
  double cap_diameters = 50.0;    // arclength cap in box diameters
  double close_factor = 0.25;     // closure ball = factor * max spacing
};

struct LeafTrace {
  std::vector<Vec2> pts;  // oriented polyline through the seed
  bool closed = false;
  bool hit_mask = false;
  bool hit_boundary = false;
  // stop cause per polyline end: [0] = front, [1] = back
  bool end_at_mask[2] = {false, false};
  double length = 0;
};

// Bilinear sample of the raw components at p. Corner vectors are sign-aligned
// with `ref` before blending so line-field data (components stored up to a
// sign) interpolates coherently. Returns false when the stencil leaves the
// domain.
bool sample_field(const SampledOneForm& form, Vec2 p, Vec2 ref, Vec2& out);

// Integral curve of the unit leaf field (-h,g)/|(g,h)| through `seed`, both
// directions, 4th-order Runge-Kutta. Terminates at the domain boundary, the
// arclength cap, or on re-entering the closure ball around the seed with an
// aligned direction (closed = true).
LeafTrace trace_leaf(const SampledOneForm& form, Vec2 seed, const TraceOptions& opts = {});

// Integral curve of the unit normal field (g,h)/|(g,h)| through `seed`.
LeafTrace trace_normal(const SampledOneForm& form, Vec2 seed, const TraceOptions& opts = {});

struct Transversal {
  std::vector<Vec2> pts;
  std::vector<double> arc;  // cumulative arclength, same size as pts
  bool end_at_mask[2] = {false, false};
  Vec2 at(double s) const;  // linear interpolation by arclength
  double length() const { return arc.empty() ? 0 : arc.back(); }
};

struct NetOptions {
  double seed_spacing_factor = 8.0;  // lattice spacing in grid units
  double coverage_factor = 8.0;      // coverage radius in grid units
  TraceOptions trace;
};

struct TransversalNet {
  std::vector<Transversal> transversals;
  double coverage_radius = 0;
};

// Greedy normal-curve net covering every unmasked cell center. Throws
// CoverageError when uncovered cells remain after seeding from every cell.
TransversalNet build_transversal_net(const SampledOneForm& form, const NetOptions& opts = {});

}  // namespace foliagraph
