#include <doctest.h>

#include <cmath>
#include <random>

#include "foliagraph/closing.hpp"
#include "foliagraph/expr.hpp"
#include "foliagraph/sample.hpp"
#include "foliagraph/wedge.hpp"

using namespace foliagraph;

TEST_CASE("parser handles the winding component expression") {
  auto e = parse_expr("4*(rho-0.5)^2*(rho-1)");
  auto val = [&](double rho) { return eval_expr(e, {rho, 0, 0}); };  // x = rho on the axis
  CHECK(val(0.5) == doctest::Approx(0.0));
  CHECK(val(1.0) == doctest::Approx(0.0));
  CHECK(val(0.75) == doctest::Approx(4 * 0.25 * 0.25 * -0.25));
}

TEST_CASE("parser: variables, precedence, unary minus, functions") {
  CHECK(eval_expr(parse_expr("x"), {3, 0, 0}) == doctest::Approx(3));
  CHECK(eval_expr(parse_expr("2+3*4^2"), {}) == doctest::Approx(50));
  CHECK(eval_expr(parse_expr("-x^2"), {2, 0, 0}) == doctest::Approx(-4));  // -(x^2)
  CHECK(eval_expr(parse_expr("10-4-3"), {}) == doctest::Approx(3));       // left associative
  CHECK(eval_expr(parse_expr("sin(x)+cos(x)"), {0, 0, 0}) == doctest::Approx(1));
  CHECK(eval_expr(parse_expr("exp(0)+sqrt(9)+abs(0-2)"), {}) == doctest::Approx(6));
  CHECK(eval_expr(parse_expr("x^-1"), {4, 0, 0}) == doctest::Approx(0.25));
  CHECK(eval_expr(parse_expr("phi"), {0, 2, 0}) == doctest::Approx(M_PI / 2));
}

TEST_CASE("parser: piecewise with variable comparisons") {
  auto w_phi = parse_expr("piecewise(rho<0.5, 0, piecewise(rho<1, 4*(rho-0.5)^2*(rho-1), rho-1))");
  CHECK(eval_expr(w_phi, {0.3, 0, 0}) == doctest::Approx(0.0));
  CHECK(eval_expr(w_phi, {0.75, 0, 0}) == doctest::Approx(-0.0625));
  CHECK(eval_expr(w_phi, {2.0, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("parser: syntax errors carry 1-based offsets") {
  try {
    parse_expr("sin(x");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 6);
    CHECK(e.expected == "')'");
  }
  CHECK_THROWS_AS(parse_expr(""), SyntaxError);
  CHECK_THROWS_AS(parse_expr("1 +"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("foo(1)"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x^y"), SyntaxError);  // integer exponents only
}

TEST_CASE("print/parse round trip") {
  std::mt19937 rng(5);
  const char* samples[] = {
      "4*(rho-0.5)^2*(rho-1)", "x+y*z", "-x/(y-3)", "sin(cos(exp(x)))",
      "piecewise(x<0.5, 1, 2)*y", "x^3-2*x+1", "abs(x)-sqrt(abs(y)+1)",
  };
  for (const char* s : samples) {
    auto once = parse_expr(s);
    auto twice = parse_expr(print_expr(once));
    CHECK(print_expr(once) == print_expr(twice));
    for (int k = 0; k < 10; ++k) {
      EvalEnv env{std::uniform_real_distribution<>(0.1, 2)(rng),
                  std::uniform_real_distribution<>(0.1, 2)(rng),
                  std::uniform_real_distribution<>(0.1, 2)(rng)};
      CHECK(eval_expr(once, env) == doctest::Approx(eval_expr(twice, env)).epsilon(1e-12));
    }
  }
}

TEST_CASE("eval: division by zero reports the location") {
  auto e = parse_expr("1/(x-1)");
  CHECK_THROWS_AS(eval_expr(e, {1, 0, 0}), EvalError);
}

TEST_CASE("sample: constant field and vanishing detection") {
  SampleRequest req;
  req.spec = {2, {-1, -1, 0}, {1, 1, 0}, {65, 65, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  auto form = sample(req);
  CHECK(form.spec.node_count() == 65 * 65);
  for (std::size_t i = 0; i < form.spec.node_count(); ++i) {
    CHECK(form.inside(i));
    CHECK(form.components[0][i] == 1.0);
  }

  SampleRequest bad = req;
  bad.component_exprs = {parse_expr("x"), parse_expr("0")};  // vanishes on x=0
  CHECK_THROWS_AS(sample(bad), VanishingFormError);
}

TEST_CASE("sample: slit masks the expected node set") {
  SampleRequest req;
  req.spec = {2, {-2, -1, 0}, {2, 1, 0}, {65, 33, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  req.slits = {{0.0, 0.0, 2.0, 0.0}};
  auto form = sample(req);
  // independent count: nodes within tube = max(hx,hy)/2 of the segment
  double tube = std::max(form.spec.spacing(0), form.spec.spacing(1)) / 2;
  std::size_t expect = 0;
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 65; ++i) {
      double x = form.spec.coord(0, i), y = form.spec.coord(1, j);
      double cx = std::clamp(x, 0.0, 2.0);
      if (std::hypot(x - cx, y - 0.0) <= tube) ++expect;
    }
  std::size_t masked = 0;
  for (std::size_t i = 0; i < form.spec.node_count(); ++i) masked += form.inside(i) ? 0 : 1;
  CHECK(masked == expect);
  CHECK(masked > 0);
}

TEST_CASE("builtin winding-cylinder: masked axis, nonvanishing elsewhere") {
  GridSpec small{3, {-2, -2, -2}, {2, 2, 2}, {17, 17, 17}};
  auto form = sample_builtin("winding-cylinder", small);
  std::size_t masked = 0;
  for (std::size_t i = 0; i < form.spec.node_count(); ++i) {
    if (!form.inside(i)) {
      ++masked;
      continue;
    }
    CHECK(form.norm_at(i) > 1e-12);
  }
  CHECK(masked > 0);  // the rho < 0.05 tube around the z axis
}

TEST_CASE("wedge: contact form residual is exactly 1 on linear data") {
  auto form = sample_builtin("contact", GridSpec{3, {-1, -1, -1}, {1, 1, 1}, {21, 21, 21}});
  auto res = wedge_residual(form);
  CHECK(res.max_abs == doctest::Approx(1.0).epsilon(1e-10));
  // field value, not just the max
  CHECK(std::fabs(res.field.at(10, 10, 10)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("wedge: exact form e^y dx has residual at rounding level") {
  SampleRequest req;
  req.spec = {3, {-1, -1, -1}, {1, 1, 1}, {17, 17, 17}};
  req.component_exprs = {parse_expr("exp(y)"), parse_expr("0"), parse_expr("0")};
  auto res = wedge_residual(sample(req));
  CHECK(res.max_abs < 1e-12);
}

TEST_CASE("wedge rejects 2D input") {
  SampleRequest req;
  req.spec = {2, {-1, -1, 0}, {1, 1, 0}, {9, 9, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  CHECK_THROWS_AS(wedge_residual(sample(req)), DimensionError);
}

TEST_CASE("wedge: second order on smooth f*dg data") {
  // omega = f dg with f = 1+x^2, g = y + x*z^2 is integrable by design
  auto build = [&](int n) {
    SampleRequest req;
    req.spec = {3, {-1, -1, -1}, {1, 1, 1}, {n, n, n}};
    req.component_exprs = {parse_expr("(1+x^2)*z^2"), parse_expr("1+x^2"),
                           parse_expr("(1+x^2)*2*x*z")};
    return sample(req);
  };
  double r1 = wedge_residual(build(17)).max_abs;
  double r2 = wedge_residual(build(33)).max_abs;
  CHECK(r1 < 0.1);
  CHECK(r2 < r1 / 3.0);  // about h^2
}

TEST_CASE("winding-cylinder residual shrinks under refinement") {
  double r1 = wedge_residual(sample_builtin("winding-cylinder", GridSpec{3, {-2, -2, -2}, {2, 2, 2}, {24, 24, 24}})).max_abs;
  double r2 = wedge_residual(sample_builtin("winding-cylinder", GridSpec{3, {-2, -2, -2}, {2, 2, 2}, {48, 48, 48}})).max_abs;
  CHECK(r2 < r1);
}

TEST_CASE("closing: omega = dx is already closed") {
  SampleRequest req;
  req.spec = {2, {-1, -1, 0}, {1, 1, 0}, {33, 33, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  auto res = closing_multiplier(sample(req));
  CHECK(res.feasible);
  CHECK(res.residual < 1e-10);
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 33; ++i) CHECK(std::fabs(res.lambda.at(i, j)) < 1e-8);
}

TEST_CASE("closing: omega = e^y dx recovers lambda = -y + const") {
  auto form = sample_builtin("exact-ey", GridSpec{2, {-1, -1, 0}, {1, 1, 0}, {65, 65, 1}});
  auto res = closing_multiplier(form);
  CHECK(res.feasible);
  CHECK(res.residual < 1e-6);
  // gauge: lambda(first node) = 0; fit the constant and check deviation
  double c = res.lambda.at(0, 0) + form.spec.coord(1, 0);
  double worst = 0;
  for (int j = 0; j < 65; ++j)
    for (int i = 0; i < 65; ++i)
      worst = std::max(worst, std::fabs(res.lambda.at(i, j) - (-form.spec.coord(1, j) + c)));
  CHECK(worst < 1e-2);
}

TEST_CASE("closing: gauge differences depend only on the leaf coordinate") {
  // two runs pinned at different nodes differ by a function constant on the
  // vertical leaves of e^y dx, i.e. a function of x alone; here the solver
  // pins deterministically, so emulate the second pin by shifting
  auto form = sample_builtin("exact-ey", GridSpec{2, {-1, -1, 0}, {1, 1, 0}, {49, 49, 1}});
  auto res = closing_multiplier(form);
  ScalarGrid shifted = res.lambda;
  double pin2 = res.lambda.at(5, 7);
  for (auto& v : shifted.values) v -= pin2;
  // difference between the runs
  double max_dev = 0;
  for (int i = 0; i < 49; ++i) {
    double column_mean = 0;
    for (int j = 0; j < 49; ++j) column_mean += res.lambda.at(i, j) - shifted.at(i, j);
    column_mean /= 49;
    for (int j = 0; j < 49; ++j)
      max_dev = std::max(max_dev, std::fabs(res.lambda.at(i, j) - shifted.at(i, j) - column_mean));
  }
  CHECK(max_dev < 1e-6);
}

TEST_CASE("closing: 3D exact form") {
  SampleRequest req;
  req.spec = {3, {-1, -1, -1}, {1, 1, 1}, {13, 13, 13}};
  req.component_exprs = {parse_expr("exp(y)"), parse_expr("0"), parse_expr("0")};
  auto res = closing_multiplier(sample(req));
  CHECK(res.feasible);
  CHECK(res.residual < 1e-5);
}

TEST_CASE("csv and header serialization is deterministic") {
  auto form = sample_builtin("exact-ey", GridSpec{2, {-1, -1, 0}, {1, 1, 0}, {17, 17, 1}});
  CHECK(form_to_csv(form) == form_to_csv(form));
  ScalarGrid g;
  g.spec = form.spec;
  g.values.assign(form.spec.node_count(), 1.5);
  auto csv = grid_to_csv(g);
  CHECK(csv.substr(0, 4) == "1.5\n");
  CHECK(grid_header_json(form.spec, form.mask).find("counts") != std::string::npos);
}
