#include "foliagraph/sample.hpp"

#include <algorithm>
#include <cmath>

namespace foliagraph {

namespace {

double point_segment_dist(double px, double py, const SlitSpec& s) {
  double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
  double len2 = dx * dx + dy * dy;
  double t = len2 == 0 ? 0 : ((px - s.x0) * dx + (py - s.y0) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  double qx = s.x0 + t * dx, qy = s.y0 + t * dy;
  return std::hypot(px - qx, py - qy);
}

}  // namespace

SampledOneForm sample(const SampleRequest& request) {
  const GridSpec& spec = request.spec;
  if (static_cast<int>(request.component_exprs.size()) != spec.dim)
    throw Error("expected " + std::to_string(spec.dim) + " component expressions");

  SampledOneForm form;
  form.spec = spec;
  std::size_t total = spec.node_count();
  form.mask.assign(total, 1);
  for (int c = 0; c < spec.dim; ++c) form.components[c].assign(total, 0.0);

  const double tube = spec.max_spacing() / 2;
  const int nz = spec.dim == 3 ? spec.n[2] : 1;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < spec.n[1]; ++j) {
      for (int i = 0; i < spec.n[0]; ++i) {
        std::size_t node = spec.index(i, j, k);
        EvalEnv env{spec.coord(0, i), spec.coord(1, j), spec.dim == 3 ? spec.coord(2, k) : 0.0};

        bool masked = false;
        for (const auto& slit : request.slits)
          if (point_segment_dist(env.x, env.y, slit) <= tube) masked = true;
        if (request.mask_out && request.mask_out(env.x, env.y, env.z)) masked = true;
        if (masked) {
          form.mask[node] = 0;
          for (int c = 0; c < spec.dim; ++c) form.components[c][node] = std::nan("");
          continue;
        }

        for (int c = 0; c < spec.dim; ++c)
          form.components[c][node] = eval_expr(request.component_exprs[c], env);
        if (form.norm_at(node) < 1e-12) throw VanishingFormError(node);
      }
    }
  }
  return form;
}

namespace {

// Cartesian components of the winding form w_rho d(rho) + w_phi d(phi) + w_z dz
// with w_rho = rho^2,
//      w_phi = 0 | 4(rho-1/2)^2(rho-1) | rho-1   on [0,1/2) | [1/2,1) | [1,inf)
//      w_z   = (1/4-rho^2)^2 | 0                 on [0,1/2) | [1/2,inf)
void winding_components(double x, double y, double& wx, double& wy, double& wz) {
  double rho = std::hypot(x, y);
  double w_rho = rho * rho;
  double w_phi;
  if (rho < 0.5) w_phi = 0.0;
  else if (rho < 1.0) w_phi = 4.0 * (rho - 0.5) * (rho - 0.5) * (rho - 1.0);
  else w_phi = rho - 1.0;
  double w_z = rho < 0.5 ? (0.25 - rho * rho) * (0.25 - rho * rho) : 0.0;
  // d(rho) = (x dx + y dy)/rho, d(phi) = (-y dx + x dy)/rho^2
  wx = w_rho * x / rho - w_phi * y / (rho * rho);
  wy = w_rho * y / rho + w_phi * x / (rho * rho);
  wz = w_z;
}

// Three-prong planar family: gradient of F = rho^2 (1 - cos(3 theta')) with
// theta' measured from rays rotated 10 degrees off the grid axes, written as
// F = rho^2 - Re(W z^3)/rho with W = e^{-i pi/6}. The prong rays carry the
// zero set of dF; no grid node ever lands on them.
void branch3_components(double x, double y, double& g, double& h) {
  const double wr = std::sqrt(3.0) / 2, wi = -0.5;  // W = e^{-i pi/6}
  double rho = std::hypot(x, y);
  double re_z2 = x * x - y * y, im_z2 = 2 * x * y;
  double re_z3 = re_z2 * x - im_z2 * y, im_z3 = re_z2 * y + im_z2 * x;
  double q = wr * re_z3 - wi * im_z3;            // Re(W z^3)
  double a = 3 * (wr * re_z2 - wi * im_z2);      // Re(3 W z^2)
  double b = -3 * (wr * im_z2 + wi * re_z2);     // -Im(3 W z^2)
  // grad F = 2(x,y) - (grad q - q (x,y)/rho^2) / rho
  g = 2 * x - (a - q * x / (rho * rho)) / rho;
  h = 2 * y - (b - q * y / (rho * rho)) / rho;
}

SampledOneForm sample_procedural(const GridSpec& spec,
                                 const std::function<void(const EvalEnv&, double*)>& fn,
                                 const std::function<bool(double, double, double)>& mask_out) {
  SampledOneForm form;
  form.spec = spec;
  std::size_t total = spec.node_count();
  form.mask.assign(total, 1);
  for (int c = 0; c < spec.dim; ++c) form.components[c].assign(total, 0.0);
  const int nz = spec.dim == 3 ? spec.n[2] : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < spec.n[1]; ++j)
      for (int i = 0; i < spec.n[0]; ++i) {
        std::size_t node = spec.index(i, j, k);
        EvalEnv env{spec.coord(0, i), spec.coord(1, j), spec.dim == 3 ? spec.coord(2, k) : 0.0};
        if (mask_out && mask_out(env.x, env.y, env.z)) {
          form.mask[node] = 0;
          for (int c = 0; c < spec.dim; ++c) form.components[c][node] = std::nan("");
          continue;
        }
        double w[3] = {0, 0, 0};
        fn(env, w);
        for (int c = 0; c < spec.dim; ++c) form.components[c][node] = w[c];
        if (form.norm_at(node) < 1e-12) throw VanishingFormError(node);
      }
  return form;
}

}  // namespace

const std::vector<BuiltinForm>& builtin_forms() {
  static const std::vector<BuiltinForm> builtins = {
      {"winding-cylinder",
       {3, {-2, -2, -2}, {2, 2, 2}, {64, 64, 64}},
       "3D integrable form whose leaves wind around the cylinder rho=1"},
      {"contact",
       {3, {-1, -1, -1}, {1, 1, 1}, {33, 33, 33}},
       "dz - x dy; not integrable, wedge residual identically 1"},
      {"exact-ey",
       {2, {-1, -1, 0}, {1, 1, 0}, {129, 129, 1}},
       "e^y dx; closing multiplier lambda = -y + const"},
      {"branch2",
       {2, {-2, -1, 0}, {2, 1, 0}, {257, 129, 1}},
       "dx on a rectangle slit along y=0, x>=0; one branching vertex"},
      {"branch3",
       {2, {-2, -2, 0}, {2, 2, 0}, {129, 129, 1}},
       "three-prong planar family; triangle micrograph"},
  };
  return builtins;
}

SampledOneForm sample_builtin(const std::string& name, std::optional<GridSpec> override_spec) {
  const BuiltinForm* found = nullptr;
  for (const auto& b : builtin_forms())
    if (b.name == name) found = &b;
  if (!found) throw Error("unknown builtin form: " + name);

  GridSpec spec = override_spec.value_or(found->default_spec);
  // exact-ey exists in both dimensions; the others are dimension-specific
  if (name != "exact-ey") spec.dim = found->default_spec.dim;

  if (name == "winding-cylinder") {
    return sample_procedural(
        spec,
        [](const EvalEnv& env, double* w) { winding_components(env.x, env.y, w[0], w[1], w[2]); },
        [](double x, double y, double) { return std::hypot(x, y) < 0.05; });
  }
  if (name == "contact") {
    return sample_procedural(
        spec, [](const EvalEnv& env, double* w) { w[0] = 0; w[1] = -env.x; w[2] = 1; }, nullptr);
  }
  if (name == "exact-ey") {
    if (spec.dim == 3 && spec.n[2] < 2) spec.n[2] = spec.n[0];
    return sample_procedural(
        spec,
        [&spec](const EvalEnv& env, double* w) {
          w[0] = std::exp(env.y);
          w[1] = 0;
          if (spec.dim == 3) w[2] = 0;
        },
        nullptr);
  }
  if (name == "branch2") {
    SampleRequest req;
    req.spec = spec;
    req.component_exprs = {parse_expr("1"), parse_expr("0")};
    req.slits = {{0.0, 0.0, spec.hi[0], 0.0}};
    return sample(req);
  }
  if (name == "branch3") {
    // the hole excises the prong point together with every leaf small enough
    // to bridge two prong rays inside one merge tube
    const double hole = 4.0 * spec.max_spacing();
    return sample_procedural(
        spec, [](const EvalEnv& env, double* w) { branch3_components(env.x, env.y, w[0], w[1]); },
        [hole](double x, double y, double) { return std::hypot(x, y) <= hole; });
  }
  throw Error("unknown builtin form: " + name);
}

}  // namespace foliagraph
