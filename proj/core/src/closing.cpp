#include "foliagraph/closing.hpp"

#include <cmath>
#include <vector>

namespace foliagraph {

namespace {

struct Sparse {
  // CSR over equations x unknowns
  std::vector<std::size_t> row_start{0};
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> rhs;

  std::size_t rows() const { return rhs.size(); }
  void add_row(const std::vector<std::pair<int, double>>& entries, double b) {
    for (auto [c, v] : entries) {
      col.push_back(c);
      val.push_back(v);
    }
    row_start.push_back(col.size());
    rhs.push_back(b);
  }
  void apply(const std::vector<double>& x, std::vector<double>& out) const {
    out.assign(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
      double s = 0;
      for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k) s += val[k] * x[col[k]];
      out[r] = s;
    }
  }
  void apply_t(const std::vector<double>& y, std::vector<double>& out, std::size_t n) const {
    out.assign(n, 0.0);
    for (std::size_t r = 0; r < rows(); ++r)
      for (std::size_t k = row_start[r]; k < row_start[r + 1]; ++k) out[col[k]] += val[k] * y[r];
  }
};

// stencil for the lambda derivative along `axis` at an unmasked node:
// central when both neighbours are usable, one-sided otherwise
bool lambda_stencil(const SampledOneForm& f, const std::vector<int>& unknown_of, int axis, int i,
                    int j, int k, std::vector<std::pair<int, double>>& entries, double coeff) {
  if (coeff == 0.0) return true;
  const GridSpec& s = f.spec;
  int d[3] = {0, 0, 0};
  d[axis] = 1;
  double h = s.spacing(axis);
  int ip = i + d[0], jp = j + d[1], kp = k + d[2];
  int im = i - d[0], jm = j - d[1], km = k - d[2];
  int nz = s.dim == 3 ? s.n[2] : 1;
  bool has_p = ip < s.n[0] && jp < s.n[1] && kp < nz && f.inside(ip, jp, kp);
  bool has_m = im >= 0 && jm >= 0 && km >= 0 && f.inside(im, jm, km);
  int self = unknown_of[s.index(i, j, k)];
  if (has_p && has_m) {
    entries.push_back({unknown_of[s.index(ip, jp, kp)], coeff / (2 * h)});
    entries.push_back({unknown_of[s.index(im, jm, km)], -coeff / (2 * h)});
    return true;
  }
  if (has_p) {
    entries.push_back({unknown_of[s.index(ip, jp, kp)], coeff / h});
    entries.push_back({self, -coeff / h});
    return true;
  }
  if (has_m) {
    entries.push_back({self, coeff / h});
    entries.push_back({unknown_of[s.index(im, jm, km)], -coeff / h});
    return true;
  }
  return false;
}

// data-side derivative with the same stencil rules, NaN when impossible
double data_diff(const SampledOneForm& f, int c, int axis, int i, int j, int k) {
  const GridSpec& s = f.spec;
  int d[3] = {0, 0, 0};
  d[axis] = 1;
  double h = s.spacing(axis);
  int ip = i + d[0], jp = j + d[1], kp = k + d[2];
  int im = i - d[0], jm = j - d[1], km = k - d[2];
  int nz = s.dim == 3 ? s.n[2] : 1;
  bool has_p = ip < s.n[0] && jp < s.n[1] && kp < nz && f.inside(ip, jp, kp);
  bool has_m = im >= 0 && jm >= 0 && km >= 0 && f.inside(im, jm, km);
  if (has_p && has_m) return (f.comp(c, ip, jp, kp) - f.comp(c, im, jm, km)) / (2 * h);
  if (has_p) return (f.comp(c, ip, jp, kp) - f.comp(c, i, j, k)) / h;
  if (has_m) return (f.comp(c, i, j, k) - f.comp(c, im, jm, km)) / h;
  return std::nan("");
}

}  // namespace

ClosingResult closing_multiplier(const SampledOneForm& form, const ClosingOptions& opts) {
  const GridSpec& s = form.spec;
  const std::size_t total = s.node_count();

  std::vector<int> unknown_of(total, -1);
  std::vector<std::size_t> node_of;
  for (std::size_t i = 0; i < total; ++i)
    if (form.inside(i)) {
      unknown_of[i] = static_cast<int>(node_of.size());
      node_of.push_back(i);
    }
  const std::size_t n = node_of.size();
  if (n == 0) throw Error("closing multiplier: empty domain");

  // Independent components of omega ^ d(lambda) = d(omega):
  //   2D:  g l_y - h l_x                     = d1 h  - d2 g
  //   3D:  w1 l_y - w2 l_x                   = d1 w2 - d2 w1
  //        w2 l_z - w3 l_y                   = d2 w3 - d3 w2
  //        w3 l_x - w1 l_z                   = d3 w1 - d1 w3
  Sparse A;
  const int nz = s.dim == 3 ? s.n[2] : 1;
  std::vector<std::pair<int, double>> entries;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < s.n[1]; ++j)
      for (int i = 0; i < s.n[0]; ++i) {
        if (!form.inside(i, j, k)) continue;
        // (coeff component, lambda axis) pairs and rhs (axis, component) pairs
        const int plan2d[1][8] = {{0, 1, 1, 0, /*rhs*/ 0, 1, 1, 0}};
        const int plan3d[3][8] = {
            {0, 1, 1, 0, 0, 1, 1, 0},  // xy
            {1, 2, 2, 1, 1, 2, 2, 1},  // yz
            {2, 0, 0, 2, 2, 0, 0, 2},  // zx
        };
        const int(*plan)[8] = s.dim == 3 ? plan3d : plan2d;
        const int nrows = s.dim == 3 ? 3 : 1;
        for (int r = 0; r < nrows; ++r) {
          double wa = form.comp(plan[r][0], i, j, k);
          double wb = form.comp(plan[r][2], i, j, k);
          entries.clear();
          bool ok = lambda_stencil(form, unknown_of, plan[r][1], i, j, k, entries, wa) &&
                    lambda_stencil(form, unknown_of, plan[r][3], i, j, k, entries, -wb);
          double rhs = data_diff(form, plan[r][5], plan[r][4], i, j, k) -
                       data_diff(form, plan[r][7], plan[r][6], i, j, k);
          if (!ok || std::isnan(rhs)) continue;
          A.add_row(entries, rhs);
        }
      }

  // normal equations with Tikhonov: (A^T A + mu I) x = A^T b
  std::vector<double> atb(n, 0.0);
  A.apply_t(A.rhs, atb, n);
  double atb_norm = 0;
  for (double v : atb) atb_norm += v * v;
  atb_norm = std::sqrt(atb_norm);

  std::vector<double> x(n, 0.0);
  ClosingResult res;
  if (atb_norm > 0) {
    std::vector<double> r = atb, p = atb, tmp_rows, ap(n);
    double rr = atb_norm * atb_norm;
    const long max_iter = static_cast<long>(opts.max_iter_factor) * static_cast<long>(n);
    long it = 0;
    while (std::sqrt(rr) > opts.cg_tol * atb_norm) {
      if (++it > max_iter)
        throw ConvergenceError("conjugate gradient stalled after " + std::to_string(max_iter) +
                               " iterations");
      A.apply(p, tmp_rows);
      A.apply_t(tmp_rows, ap, n);
      for (std::size_t i = 0; i < n; ++i) ap[i] += opts.tikhonov * p[i];
      double pap = 0;
      for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
      if (pap <= 0) throw ConvergenceError("conjugate gradient lost positivity");
      double alpha = rr / pap;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      double rr_new = 0;
      for (std::size_t i = 0; i < n; ++i) rr_new += r[i] * r[i];
      double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    res.iterations = static_cast<int>(it);
  }

  // residual of the original system
  std::vector<double> ax;
  A.apply(x, ax);
  double num = 0, den = 0;
  for (std::size_t r = 0; r < A.rows(); ++r) {
    num += (ax[r] - A.rhs[r]) * (ax[r] - A.rhs[r]);
    den += A.rhs[r] * A.rhs[r];
  }
  res.residual = std::sqrt(num) / std::max(1.0, std::sqrt(den));
  res.feasible = res.residual <= opts.infeasible_threshold;

  // gauge: first unmasked node pinned to zero
  double pin = x[0];
  res.lambda.spec = s;
  res.lambda.values.assign(total, std::nan(""));
  for (std::size_t u = 0; u < n; ++u) res.lambda.values[node_of[u]] = x[u] - pin;
  return res;
}

}  // namespace foliagraph
