#include "foliagraph/wedge.hpp"

#include <cmath>

namespace foliagraph {

namespace {

// derivative of component c along axis at node (i,j,k); central where both
// neighbours exist in the domain, one-sided otherwise, NaN if neither does
double diff(const SampledOneForm& f, int c, int axis, int i, int j, int k) {
  int d[3] = {0, 0, 0};
  d[axis] = 1;
  const GridSpec& s = f.spec;
  double h = s.spacing(axis);
  int ip = i + d[0], jp = j + d[1], kp = k + d[2];
  int im = i - d[0], jm = j - d[1], km = k - d[2];
  bool has_p = ip < s.n[0] && jp < s.n[1] && kp < (s.dim == 3 ? s.n[2] : 1) && f.inside(ip, jp, kp);
  bool has_m = im >= 0 && jm >= 0 && km >= 0 && f.inside(im, jm, km);
  if (has_p && has_m) return (f.comp(c, ip, jp, kp) - f.comp(c, im, jm, km)) / (2 * h);
  if (has_p) return (f.comp(c, ip, jp, kp) - f.comp(c, i, j, k)) / h;
  if (has_m) return (f.comp(c, i, j, k) - f.comp(c, im, jm, km)) / h;
  return std::nan("");
}

}  // namespace

WedgeResult wedge_residual(const SampledOneForm& form) {
  if (form.spec.dim != 3)
    throw DimensionError("wedge residual needs a 3D form; planar one-forms satisfy it identically");

  WedgeResult res;
  res.field.spec = form.spec;
  res.field.values.assign(form.spec.node_count(), std::nan(""));

  const GridSpec& s = form.spec;
  for (int k = 1; k + 1 < s.n[2]; ++k)
    for (int j = 1; j + 1 < s.n[1]; ++j)
      for (int i = 1; i + 1 < s.n[0]; ++i) {
        if (!form.inside(i, j, k)) continue;
        double d2w3 = diff(form, 2, 1, i, j, k), d3w2 = diff(form, 1, 2, i, j, k);
        double d3w1 = diff(form, 0, 2, i, j, k), d1w3 = diff(form, 2, 0, i, j, k);
        double d1w2 = diff(form, 1, 0, i, j, k), d2w1 = diff(form, 0, 1, i, j, k);
        double r = form.comp(0, i, j, k) * (d2w3 - d3w2) + form.comp(1, i, j, k) * (d3w1 - d1w3) +
                   form.comp(2, i, j, k) * (d1w2 - d2w1);
        if (std::isnan(r)) continue;
        res.field.at(i, j, k) = r;
        res.max_abs = std::max(res.max_abs, std::fabs(r));
      }
  return res;
}

}  // namespace foliagraph
