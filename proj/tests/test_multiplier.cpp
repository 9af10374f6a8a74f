#include <doctest.h>

#include <cmath>

#include "foliagraph/analyze.hpp"
#include "foliagraph/sample.hpp"
#include "support.hpp"

using namespace foliagraph;

namespace {

AnalysisResult analyze_dx() {
  SampleRequest req;
  req.spec = {2, {-1, -1, 0}, {1, 1, 0}, {65, 65, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  AnalyzeOptions opts;
  opts.allow_fastpath = false;  // exercise the chart machinery
  return analyze(sample(req), opts);
}

}  // namespace

TEST_CASE("build_f on the single-edge dx configuration is increasing in x") {
  auto res = analyze_dx();
  REQUIRE(res.multiplier.has_value());
  const auto& f = res.multiplier->f;
  for (int j = 8; j < 57; j += 16) {
    double prev = -1e300;
    for (int i = 0; i < 65; ++i) {
      CHECK(f.at(i, j) > prev);
      prev = f.at(i, j);
    }
  }
  // f constant on each leaf (vertical lines)
  for (int i = 0; i < 65; i += 7)
    for (int j = 1; j < 65; ++j) CHECK(f.at(i, j) == doctest::Approx(f.at(i, 0)).epsilon(1e-9));
}

TEST_CASE("compute_lambda: f = x against dx gives lambda = 1") {
  SampleRequest req;
  req.spec = {2, {-1, -1, 0}, {1, 1, 0}, {33, 33, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  auto form = sample(req);
  ScalarGrid f;
  f.spec = form.spec;
  f.values.resize(form.spec.node_count());
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 33; ++i) f.at(i, j) = form.spec.coord(0, i);
  auto res = compute_lambda(f, form);
  CHECK(res.report.min_abs_lambda == doctest::Approx(1.0));
  CHECK(res.report.max_rel_residual < 1e-12);
  CHECK(res.lambda.at(16, 16) == doctest::Approx(1.0));
}

TEST_CASE("compute_lambda: smoothstep in x keeps lambda positive on the chart") {
  SampleRequest req;
  req.spec = {2, {0, 0, 0}, {1, 1, 0}, {33, 33, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  auto form = sample(req);
  ScalarGrid f;
  f.spec = form.spec;
  f.values.resize(form.spec.node_count());
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 33; ++i) {
      double t = form.spec.coord(0, i);
      f.at(i, j) = t * t * (3 - 2 * t);
    }
  auto res = compute_lambda(f, form);
  // phi' = 6t(1-t) > 0 in the interior; discrete quotients at the flat ends
  // stay positive
  for (int i = 1; i < 32; ++i) CHECK(res.lambda.at(i, 16) > 0);
  CHECK(res.report.max_rel_residual < 1e-12);
}

TEST_CASE("end-to-end branch2 multiplier passes verify") {
  auto form = sample_builtin("branch2", GridSpec{2, {-2, -1, 0}, {2, 1, 0}, {129, 65, 1}});
  auto res = analyze(form);
  REQUIRE(res.multiplier.has_value());
  const auto& rep = res.multiplier->report;
  CHECK(rep.min_abs_grad_f > 0);
  CHECK(rep.min_abs_lambda > 0);
  CHECK(rep.max_rel_residual < 1e-3);
  CHECK(verify(*res.multiplier).pass);

  // f < 0 left of the branching, f > 0 on both right branches, 0 at the vertex level
  const auto& f = res.multiplier->f;
  CHECK(f.at(10, 48) < 0);
  CHECK(f.at(10, 16) < 0);
  CHECK(f.at(110, 48) > 0);
  CHECK(f.at(110, 16) > 0);
}

TEST_CASE("branch2 f level sets match the traced leaves") {
  auto form = sample_builtin("branch2", GridSpec{2, {-2, -1, 0}, {2, 1, 0}, {129, 65, 1}});
  auto res = analyze(form);
  REQUIRE(res.multiplier.has_value());
  const auto& f = res.multiplier->f;
  // leaves are vertical: f must be y-independent except across the slit
  for (int i = 5; i < 60; i += 9)
    for (int j = 1; j < 65; ++j)
      CHECK(f.at(i, j) == doctest::Approx(f.at(i, 32)).epsilon(1e-9));
}

TEST_CASE("verify rejects injected defects") {
  auto form = sample_builtin("branch2", GridSpec{2, {-2, -1, 0}, {2, 1, 0}, {129, 65, 1}});
  auto res = analyze(form);
  REQUIRE(res.multiplier.has_value());

  auto flipped = *res.multiplier;
  flipped.report.min_abs_lambda = -0.1;
  CHECK(!verify(flipped).pass);
  CHECK(verify(flipped).worst.find("lambda") != std::string::npos);

  auto perturbed = *res.multiplier;
  perturbed.report.max_rel_residual = 0.1;
  CHECK(!verify(perturbed).pass);

  auto degenerate = *res.multiplier;
  degenerate.report.min_abs_grad_f = 0.0;
  CHECK(!verify(degenerate).pass);
}

TEST_CASE("verify re-derived from a perturbed f fails on residual") {
  auto form = sample_builtin("branch2", GridSpec{2, {-2, -1, 0}, {2, 1, 0}, {65, 33, 1}});
  auto res = analyze(form);
  REQUIRE(res.multiplier.has_value());
  ScalarGrid f = res.multiplier->f;
  // 10% off-leaf perturbation: f picks up y-dependence, residual blows up
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 65; ++i)
      if (!std::isnan(f.at(i, j))) f.at(i, j) += 0.1 * std::fabs(f.at(i, j)) * form.spec.coord(1, j);
  auto bad = compute_lambda(f, form);
  CHECK(!verify(bad).pass);
}

TEST_CASE("triangle certificate request is rejected") {
  auto res = solve_global(testsupport::load_config("triangle.json"));
  REQUIRE(!eulerian(res));
  // build_f needs a certificate; handing it an obstruction is a type error by
  // construction, so the pipeline reports no multiplier instead
  auto form = sample_builtin("branch3", GridSpec{2, {-2, -2, 0}, {2, 2, 0}, {65, 65, 1}});
  auto full = analyze(form);
  CHECK(!full.multiplier.has_value());
}

TEST_CASE("two branching vertices: levels separate the f ranges") {
  // two slits leave a middle family joining two branch points; the level map
  // must put every f value of a lower edge strictly below the upper ones
  SampleRequest req;
  req.spec = {2, {-2, -1, 0}, {2, 1, 0}, {257, 129, 1}};
  req.component_exprs = {parse_expr("1"), parse_expr("0")};
  req.slits = {{-2.0, 0.0, -0.5, 0.0}, {0.5, 0.0, 2.0, 0.0}};
  auto form = sample(req);
  auto res = analyze(form);

  REQUIRE(res.decision.has_value());
  REQUIRE(eulerian(*res.decision));
  const auto& cert = std::get<EulerianCertificate>(*res.decision);
  REQUIRE(cert.levels.size() == 2);
  long long a0 = cert.levels.begin()->second;
  long long a1 = std::next(cert.levels.begin())->second;
  CHECK(std::llabs(a1 - a0) == 1);

  REQUIRE(res.multiplier.has_value());
  CHECK(verify(*res.multiplier).pass);
  const auto& f = res.multiplier->f;
  const GridSpec& s = form.spec;
  auto at = [&](double x, double y) {
    int i = static_cast<int>(std::lround((x - s.lo[0]) / s.spacing(0)));
    int j = static_cast<int>(std::lround((y - s.lo[1]) / s.spacing(1)));
    return f.at(i, j);
  };
  double lo = std::min(a0, a1), hi = std::max(a0, a1);
  // left family below the lower level window, middle strictly between the
  // two vertex levels, right above the upper window
  for (double y : {-0.5, 0.5}) {
    CHECK(at(-1.5, y) < lo - 0.25);
    CHECK(at(0.0, y) > lo + 0.25);
    CHECK(at(0.0, y) < hi - 0.25);
    CHECK(at(1.5, y) > hi + 0.25);
  }
}
