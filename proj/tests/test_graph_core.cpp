#include <doctest.h>

#include <algorithm>
#include <random>

#include "foliagraph/config_json.hpp"
#include "foliagraph/eulerian.hpp"
#include "foliagraph/main_graph.hpp"
#include "support.hpp"

using namespace foliagraph;
using testsupport::load_config;
using testsupport::random_config;

TEST_CASE("validate accepts branch2 and names offending ids") {
  auto config = load_config("branch2.json");
  CHECK(validate(config).empty());

  auto bad = config;
  bad.micrographs["v0"].push_back({"s_bad", {"L1x", "L1x"}});
  auto violations = validate(bad);
  REQUIRE(!violations.empty());
  bool ends_equal = false, non_incident = false;
  for (const auto& v : violations) {
    if (v.code == "micro-edge-ends-equal" && v.id == "s_bad") ends_equal = true;
    if (v.code == "unknown-micro-vertex") non_incident = true;
  }
  CHECK(ends_equal);
  CHECK(non_incident);
}

TEST_CASE("validate flags non-incident micro-vertices") {
  auto config = load_config("parallel.json");
  config.edges.push_back({"L9", {vertex_end("v0"), open_end()}});
  config.micrographs["v1"].push_back({"s_bad", {"L9", "L1"}});  // L9 does not meet v1
  auto violations = validate(config);
  bool found = false;
  for (const auto& v : violations)
    if (v.code == "non-incident-micro-vertex" && v.id == "s_bad") found = true;
  CHECK(found);
}

TEST_CASE("validate rejects loops and endpoint micrographs, allows free lines") {
  GraphicalConfiguration c;
  c.vertices = {{"a", false}, {"e", true}};
  c.edges = {{"l", {vertex_end("a"), vertex_end("a")}}, {"o", {open_end(), open_end()}}};
  c.micrographs["e"] = {{"m", {"l", "o"}}};
  auto violations = validate(c);
  auto has = [&](const std::string& code) {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
  };
  CHECK(has("loop-edge"));
  CHECK(has("endpoint-with-micrograph"));

  // a single edge with both ends open is the trivial configuration and valid
  GraphicalConfiguration trivial;
  trivial.edges = {{"e0", {open_end(), open_end()}}};
  CHECK(validate(trivial).empty());
  CHECK(eulerian(solve_global(trivial)));
}

TEST_CASE("path micrograph is bipartite with canonical signs") {
  auto config = load_config("branch2.json");
  auto r = is_bipartite(config, "v0");
  REQUIRE(r.ok);
  // smallest micro-vertex of the component gets +
  CHECK(r.signs.at("L+") == 1);
  CHECK(r.signs.at("L-") == 1);
  CHECK(r.signs.at("L0") == -1);
}

TEST_CASE("triangle micrograph yields an odd cycle of length 3") {
  auto config = load_config("triangle.json");
  auto r = is_bipartite(config, "v0");
  REQUIRE(!r.ok);
  CHECK(r.odd_cycle.size() == 3);
  // witness re-validates
  Obstruction obs;
  obs.kind = Obstruction::Kind::OddMicroCycle;
  obs.vertex = "v0";
  obs.micro_cycle = r.odd_cycle;
  std::string why;
  CHECK_MESSAGE(verify_obstruction(config, obs, &why), why);
}

TEST_CASE("hexagon micrograph is bipartite") {
  auto config = load_config("hexagon.json");
  CHECK(is_bipartite(config, "v0").ok);
}

TEST_CASE("is_bipartite agrees with exhaustive 2-coloring") {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    auto config = random_config(rng, {.max_vertices = 1, .max_edges = 6, .max_micro_per_vertex = 6,
                                      .p_open = 1.0});
    if (config.vertices.empty()) continue;
    const std::string v = config.vertices[0].id;
    auto verts = config.incident_edges(v);
    if (verts.size() > 12) continue;
    auto micros = config.micro_at(v);

    bool feasible = false;
    for (std::uint64_t mask = 0; mask < (1ull << verts.size()) && !feasible; ++mask) {
      std::map<std::string, int> color;
      for (std::size_t i = 0; i < verts.size(); ++i) color[verts[i]] = (mask >> i) & 1;
      bool ok = true;
      for (const auto& m : micros)
        if (color.at(m.ends[0]) == color.at(m.ends[1])) ok = false;
      feasible = feasible || ok;
    }
    auto r = is_bipartite(config, v);
    CHECK(r.ok == feasible);
    if (!r.ok) CHECK(r.odd_cycle.size() % 2 == 1);
  }
}

TEST_CASE("is_locally_eulerian on the three reference configurations") {
  CHECK(!is_locally_eulerian(load_config("branch2.json")).has_value());

  auto tri = is_locally_eulerian(load_config("triangle.json"));
  REQUIRE(tri.has_value());
  CHECK(tri->kind == Obstruction::Kind::OddMicroCycle);

  auto ep = is_locally_eulerian(load_config("endpoint.json"));
  REQUIRE(ep.has_value());
  CHECK(ep->kind == Obstruction::Kind::EndpointPresent);
  CHECK(ep->vertex == "e0");
}

TEST_CASE("solve_global: branch2 gets the canonical certificate") {
  auto config = load_config("branch2.json");
  auto result = solve_global(config);
  REQUIRE(eulerian(result));
  const auto& cert = std::get<EulerianCertificate>(result);
  // L0 points into v0, the branches point out
  CHECK(cert.orientation.head("L0") == vertex_end("v0"));
  CHECK(cert.orientation.tail("L+") == vertex_end("v0"));
  CHECK(cert.orientation.tail("L-") == vertex_end("v0"));
  CHECK(cert.levels.at("v0") == 0);
  CHECK(cert.epsilons.at("v0") == 0.25);
  std::string why;
  CHECK_MESSAGE(verify_certificate(config, cert, &why), why);
}

TEST_CASE("solve_global: parallel edges are locally but not globally eulerian") {
  auto config = load_config("parallel.json");
  CHECK(!is_locally_eulerian(config).has_value());
  auto result = solve_global(config);
  REQUIRE(!eulerian(result));
  const auto& obs = std::get<Obstruction>(result);
  CHECK(obs.kind == Obstruction::Kind::OrientedMonochromeCycle);
  std::string why;
  CHECK_MESSAGE(verify_obstruction(config, obs, &why), why);
}

TEST_CASE("solve_global: single vertex with no edges") {
  GraphicalConfiguration config;
  config.vertices = {{"v0", false}};
  auto result = solve_global(config);
  REQUIRE(eulerian(result));
  const auto& cert = std::get<EulerianCertificate>(result);
  CHECK(cert.orientation.dir.empty());
  CHECK(cert.levels.at("v0") == 0);
}

TEST_CASE("solve_global throws past the free-class bound") {
  // 21 disjoint two-edge path gadgets, one relevant parity class each
  GraphicalConfiguration config;
  for (int i = 0; i < 21; ++i) {
    std::string a = "a" + std::to_string(i), m = "m" + std::to_string(i), b = "b" + std::to_string(i);
    config.vertices.push_back({a, false});
    config.vertices.push_back({m, false});
    config.vertices.push_back({b, false});
    config.edges.push_back({"p" + std::to_string(i), {vertex_end(a), vertex_end(m)}});
    config.edges.push_back({"q" + std::to_string(i), {vertex_end(m), vertex_end(b)}});
    config.micrographs[m] = {{"s" + std::to_string(i), {"p" + std::to_string(i), "q" + std::to_string(i)}}};
  }
  REQUIRE(validate(config).empty());
  CHECK_THROWS_AS(solve_global(config), ExhaustionLimitError);
  SolveOptions opts;
  opts.max_free_classes = 22;
  CHECK(eulerian(solve_global(config, opts)));
}

TEST_CASE("assign_levels: longest-path layering and cycle error") {
  GraphicalConfiguration config;
  config.vertices = {{"v1", false}, {"v2", false}, {"v3", false}};
  config.edges = {{"a", {vertex_end("v1"), vertex_end("v2")}},
                  {"b", {vertex_end("v2"), vertex_end("v3")}}};
  Orientation fwd;
  fwd.dir["a"] = {vertex_end("v1"), vertex_end("v2")};
  fwd.dir["b"] = {vertex_end("v2"), vertex_end("v3")};
  auto lv = assign_levels(config, fwd);
  CHECK(lv.a.at("v1") == 0);
  CHECK(lv.a.at("v2") == 1);
  CHECK(lv.a.at("v3") == 2);
  CHECK(lv.eps.at("v2") == 0.25);

  config.edges.push_back({"c", {vertex_end("v3"), vertex_end("v1")}});
  Orientation cyc = fwd;
  cyc.dir["c"] = {vertex_end("v3"), vertex_end("v1")};
  CHECK_THROWS_AS(assign_levels(config, cyc), CycleError);
}

TEST_CASE("build_main_graph on branch2 and the parallel pair") {
  auto mu = build_main_graph(load_config("branch2.json"));
  CHECK(mu.n == 6);               // 3 micro-vertices + 3 open ends
  CHECK(mu.edges.size() == 5);    // 2 micro + 3 macro
  CHECK(betti1(mu) == 0);

  auto mu2 = build_main_graph(load_config("parallel.json"));
  CHECK(mu2.n == 4);
  CHECK(mu2.edges.size() == 4);   // a 4-cycle
  CHECK(betti1(mu2) == 1);

  GraphicalConfiguration empty;
  auto mu3 = build_main_graph(empty);
  CHECK(mu3.n == 0);
  CHECK(mu3.edges.empty());
}

TEST_CASE("betti1 on trees, triangles and disjoint unions") {
  Multigraph tree;
  tree.n = 5;
  tree.edges = {{0, 1}, {1, 2}, {2, 3}, {2, 4}};
  CHECK(betti1(tree) == 0);

  Multigraph triangle;
  triangle.n = 3;
  triangle.edges = {{0, 1}, {1, 2}, {2, 0}};
  CHECK(betti1(triangle) == 1);

  Multigraph two;
  two.n = 6;
  two.edges = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
  CHECK(betti1(two) == 2);
}

TEST_CASE("brute force oracle on the fixtures") {
  CHECK(eulerian(brute_force_global(load_config("branch2.json"))));
  CHECK(!eulerian(brute_force_global(load_config("parallel.json"))));
  CHECK(!eulerian(brute_force_global(load_config("triangle.json"))));

  GraphicalConfiguration big;
  big.vertices = {{"v", false}};
  for (int i = 0; i < 13; ++i)
    big.edges.push_back({"L" + std::to_string(i), {vertex_end("v"), open_end()}});
  CHECK_THROWS_AS(brute_force_global(big), SizeLimitError);
}

TEST_CASE("solve_global matches brute force on random configurations") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    auto config = random_config(rng, {.max_vertices = 3, .max_edges = 5});
    if (!validate(config).empty()) continue;
    auto exact = solve_global(config);
    auto brute = brute_force_global(config);
    CHECK(eulerian(exact) == eulerian(brute));
    if (eulerian(exact)) {
      std::string why;
      CHECK_MESSAGE(verify_certificate(config, std::get<EulerianCertificate>(exact), &why), why);
    } else {
      std::string why;
      CHECK_MESSAGE(verify_obstruction(config, std::get<Obstruction>(exact), &why), why);
    }
  }
}

TEST_CASE("solve_global success implies locally eulerian") {
  std::mt19937 rng(13);
  for (int iter = 0; iter < 200; ++iter) {
    auto config = random_config(rng, {.max_vertices = 3, .max_edges = 5, .endpoint_free = false});
    if (!validate(config).empty()) continue;
    auto result = solve_global(config);
    if (eulerian(result)) CHECK(!is_locally_eulerian(config).has_value());
  }
}

TEST_CASE("tree configurations are globally eulerian") {
  std::mt19937 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    auto config = random_config(rng, {.max_vertices = 6, .tree = true});
    REQUIRE(validate(config).empty());
    CHECK(eulerian(solve_global(config)));
  }
}

TEST_CASE("betti additivity over the blow-up") {
  std::mt19937 rng(19);
  for (int iter = 0; iter < 300; ++iter) {
    auto config = random_config(rng, {.max_vertices = 4, .max_edges = 7,
                                      .connected_micrographs = true});
    if (!validate(config).empty()) continue;
    int lhs = betti1(build_main_graph(config));
    int rhs = betti1(macrograph(config));
    for (const auto& v : config.vertices) rhs += betti1(micrograph_of(config, v.id));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("parity contradiction witness: odd closed walk in the main graph") {
  // three parallel edges; the micrographs force A and C to agree at v0 but
  // disagree at v1, an odd cycle in the main graph that stays bipartite at
  // every single vertex
  GraphicalConfiguration config;
  config.vertices = {{"v0", false}, {"v1", false}};
  config.edges = {{"A", {vertex_end("v0"), vertex_end("v1")}},
                  {"B", {vertex_end("v0"), vertex_end("v1")}},
                  {"C", {vertex_end("v0"), vertex_end("v1")}}};
  config.micrographs["v0"] = {{"m0", {"A", "B"}}, {"m1", {"B", "C"}}};
  config.micrographs["v1"] = {{"m4", {"A", "C"}}};
  REQUIRE(validate(config).empty());
  auto result = solve_global(config);
  REQUIRE(!eulerian(result));
  const auto& obs = std::get<Obstruction>(result);
  CHECK(obs.kind == Obstruction::Kind::ParityContradiction);
  CHECK(obs.walk.size() % 2 == 1);
  std::string why;
  CHECK_MESSAGE(verify_obstruction(config, obs, &why), why);
  CHECK(!eulerian(brute_force_global(config)));
}

TEST_CASE("deterministic byte-identical serialization") {
  auto config = load_config("branch2.json");
  auto r1 = solve_global(config);
  auto r2 = solve_global(config);
  CHECK(result_to_json(r1) == result_to_json(r2));
  CHECK(config_to_json(config) == config_to_json(config));
}

TEST_CASE("configuration isomorphism is id-blind") {
  auto a = load_config("branch2.json");
  auto b = a;
  for (auto& e : b.edges) e.id = "renamed_" + e.id;
  for (auto& [v, ms] : b.micrographs)
    for (auto& m : ms) {
      m.ends[0] = "renamed_" + m.ends[0];
      m.ends[1] = "renamed_" + m.ends[1];
    }
  CHECK(configs_isomorphic(a, b));
  CHECK(!configs_isomorphic(a, load_config("triangle.json")));
  CHECK(!configs_isomorphic(a, load_config("parallel.json")));
}

TEST_CASE("is_locally_eulerian reports the first obstruction in sorted order") {
  GraphicalConfiguration config;
  config.vertices = {{"zz", true}, {"aa", true}};
  auto obs = is_locally_eulerian(config);
  REQUIRE(obs.has_value());
  CHECK(obs->kind == Obstruction::Kind::EndpointPresent);
  CHECK(obs->vertex == "aa");

  // endpoint flag checked before the micrograph at each vertex in id order
  GraphicalConfiguration mixed;
  mixed.vertices = {{"b", true}, {"a", false}};
  mixed.edges = {{"L1", {vertex_end("a"), open_end()}},
                 {"L2", {vertex_end("a"), open_end()}},
                 {"L3", {vertex_end("a"), open_end()}}};
  mixed.micrographs["a"] = {{"m1", {"L1", "L2"}}, {"m2", {"L2", "L3"}}, {"m3", {"L3", "L1"}}};
  auto obs2 = is_locally_eulerian(mixed);
  REQUIRE(obs2.has_value());
  CHECK(obs2->kind == Obstruction::Kind::OddMicroCycle);  // "a" sorts before "b"
  CHECK(obs2->vertex == "a");
}
