#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "foliagraph/config.hpp"
#include "foliagraph/config_json.hpp"

namespace testsupport {

using namespace foliagraph;

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(FOLIAGRAPH_TEST_DATA) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GraphicalConfiguration load_config(const std::string& name) {
  return config_from_json(read_fixture(name));
}

struct GenOptions {
  int max_vertices = 4;
  int max_edges = 6;
  int max_micro_per_vertex = 3;
  double p_open = 0.3;
  bool endpoint_free = true;
  bool connected_micrographs = false;  // spanning-tree micrographs plus extras
  bool tree = false;                   // tree macrograph and tree micrographs
};

// Random valid configuration; with `connected_micrographs` every vertex's
// micro-edges span all incident edges (the shape leaf-space extraction
// produces), with `tree` both levels are acyclic.
inline GraphicalConfiguration random_config(std::mt19937& rng, const GenOptions& opt = {}) {
  GraphicalConfiguration c;
  std::uniform_int_distribution<int> nv(opt.tree ? 1 : 0, opt.max_vertices);
  int k = nv(rng);
  for (int i = 0; i < k; ++i) {
    bool endpoint = false;
    if (!opt.endpoint_free && k > 0) endpoint = std::uniform_real_distribution<>(0, 1)(rng) < 0.15;
    c.vertices.push_back({"v" + std::to_string(i), endpoint});
  }

  int ne;
  if (opt.tree) {
    ne = k - 1;
  } else {
    ne = std::uniform_int_distribution<int>(0, opt.max_edges)(rng);
  }
  auto rand_end = [&](bool allow_open) -> EdgeEnd {
    if (k == 0 || (allow_open && std::uniform_real_distribution<>(0, 1)(rng) < opt.p_open))
      return open_end();
    return vertex_end("v" + std::to_string(std::uniform_int_distribution<int>(0, k - 1)(rng)));
  };
  int made = 0;
  for (int attempts = 0; made < ne && attempts < 20 * (ne + 1); ++attempts) {
    Edge e;
    e.id = "L" + std::to_string(made);
    if (opt.tree) {
      // edge made+1 hangs below a random earlier vertex
      int child = made + 1;
      int parent = std::uniform_int_distribution<int>(0, child - 1)(rng);
      e.ends[0] = vertex_end("v" + std::to_string(parent));
      e.ends[1] = vertex_end("v" + std::to_string(child));
    } else {
      e.ends[0] = rand_end(true);
      e.ends[1] = rand_end(!e.ends[0].open());
      if (!e.ends[0].open() && !e.ends[1].open() && e.ends[0] == e.ends[1]) continue;  // no loops
      if (e.ends[0].open() && e.ends[1].open()) continue;
    }
    c.edges.push_back(e);
    ++made;
  }
  if (opt.tree) {
    // a few open pendant edges keep b1 at zero
    int extra = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < extra; ++i) {
      Edge e;
      e.id = "L" + std::to_string(made++);
      e.ends[0] = vertex_end("v" + std::to_string(std::uniform_int_distribution<int>(0, k - 1)(rng)));
      e.ends[1] = open_end();
      c.edges.push_back(e);
    }
  }

  int micro_id = 0;
  for (const auto& v : c.vertices) {
    if (v.endpoint) continue;
    auto incident = c.incident_edges(v.id);
    if (incident.size() < 2) continue;
    auto& micros = c.micrographs[v.id];
    if (opt.tree || opt.connected_micrographs) {
      // spanning tree over the incident edges
      std::vector<std::string> pool = incident;
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t i = 1; i < pool.size(); ++i) {
        std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        micros.push_back({"s" + std::to_string(micro_id++), {pool[i], pool[j]}});
      }
      if (!opt.tree && opt.max_micro_per_vertex > static_cast<int>(pool.size()) - 1) {
        int extras = std::uniform_int_distribution<int>(0, 1)(rng);
        for (int x = 0; x < extras; ++x) {
          auto a = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
          auto b = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
          if (a == b) continue;
          micros.push_back({"s" + std::to_string(micro_id++), {pool[a], pool[b]}});
        }
      }
    } else {
      int m = std::uniform_int_distribution<int>(0, opt.max_micro_per_vertex)(rng);
      for (int x = 0; x < m; ++x) {
        auto a = std::uniform_int_distribution<std::size_t>(0, incident.size() - 1)(rng);
        auto b = std::uniform_int_distribution<std::size_t>(0, incident.size() - 1)(rng);
        if (a == b) continue;
        micros.push_back({"s" + std::to_string(micro_id++), {incident[a], incident[b]}});
      }
    }
    if (micros.empty()) c.micrographs.erase(v.id);
  }
  return c;
}

}  // namespace testsupport
