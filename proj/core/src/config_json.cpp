#include "foliagraph/config_json.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "foliagraph/main_graph.hpp"

namespace foliagraph {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error("config schema error at " + path + ": " + what);
}

EdgeEnd end_from_json(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected string or \"OPEN_END\"");
  std::string s = j.get<std::string>();
  if (s == kOpenEnd) return open_end();
  return vertex_end(s);
}

json end_to_json(const EdgeEnd& e) { return e.open() ? json(kOpenEnd) : json(e.name()); }

}  // namespace

GraphicalConfiguration config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("/", "expected object");

  GraphicalConfiguration config;
  if (!j.contains("vertices") || !j["vertices"].is_array()) schema_error("/vertices", "expected array");
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const auto& jv = j["vertices"][i];
    std::string path = "/vertices/" + std::to_string(i);
    if (!jv.is_object() || !jv.contains("id") || !jv["id"].is_string())
      schema_error(path, "expected {\"id\":str,\"endpoint\":bool}");
    Vertex v;
    v.id = jv["id"].get<std::string>();
    if (jv.contains("endpoint")) {
      if (!jv["endpoint"].is_boolean()) schema_error(path + "/endpoint", "expected bool");
      v.endpoint = jv["endpoint"].get<bool>();
    }
    config.vertices.push_back(std::move(v));
  }

  if (!j.contains("edges") || !j["edges"].is_array()) schema_error("/edges", "expected array");
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const auto& je = j["edges"][i];
    std::string path = "/edges/" + std::to_string(i);
    if (!je.is_object() || !je.contains("id") || !je["id"].is_string() || !je.contains("ends") ||
        !je["ends"].is_array() || je["ends"].size() != 2)
      schema_error(path, "expected {\"id\":str,\"ends\":[end,end]}");
    Edge e;
    e.id = je["id"].get<std::string>();
    e.ends[0] = end_from_json(je["ends"][0], path + "/ends/0");
    e.ends[1] = end_from_json(je["ends"][1], path + "/ends/1");
    config.edges.push_back(std::move(e));
  }

  if (j.contains("micrographs")) {
    if (!j["micrographs"].is_object()) schema_error("/micrographs", "expected object");
    for (const auto& [vid, jm] : j["micrographs"].items()) {
      std::string path = "/micrographs/" + vid;
      if (!jm.is_array()) schema_error(path, "expected array");
      auto& micros = config.micrographs[vid];
      for (std::size_t i = 0; i < jm.size(); ++i) {
        const auto& m = jm[i];
        std::string mpath = path + "/" + std::to_string(i);
        if (!m.is_object() || !m.contains("id") || !m["id"].is_string() || !m.contains("ends") ||
            !m["ends"].is_array() || m["ends"].size() != 2 || !m["ends"][0].is_string() ||
            !m["ends"][1].is_string())
          schema_error(mpath, "expected {\"id\":str,\"ends\":[edgeId,edgeId]}");
        micros.push_back({m["id"].get<std::string>(),
                          {m["ends"][0].get<std::string>(), m["ends"][1].get<std::string>()}});
      }
    }
  }
  return config;
}

std::string config_to_json(const GraphicalConfiguration& config) {
  json j;
  j["vertices"] = json::array();
  auto vs = config.vertices;
  std::sort(vs.begin(), vs.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (const auto& v : vs) j["vertices"].push_back({{"id", v.id}, {"endpoint", v.endpoint}});

  j["edges"] = json::array();
  auto es = config.edges;
  std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (const auto& e : es)
    j["edges"].push_back({{"id", e.id}, {"ends", {end_to_json(e.ends[0]), end_to_json(e.ends[1])}}});

  j["micrographs"] = json::object();
  for (const auto& [vid, micros] : config.micrographs) {
    auto ms = micros;
    std::sort(ms.begin(), ms.end(), [](const MicroEdge& a, const MicroEdge& b) { return a.id < b.id; });
    json arr = json::array();
    for (const auto& m : ms) arr.push_back({{"id", m.id}, {"ends", {m.ends[0], m.ends[1]}}});
    j["micrographs"][vid] = arr;
  }
  return j.dump(2) + "\n";
}

std::string certificate_to_json(const EulerianCertificate& cert) {
  json j;
  j["kind"] = "certificate";
  json dir = json::object();
  for (const auto& [eid, d] : cert.orientation.dir)
    dir[eid] = {end_to_json(d[0]), end_to_json(d[1])};
  j["orientation"] = dir;
  json bp = json::object();
  for (const auto& [vid, signs] : cert.bipartitions.sign) {
    json s = json::object();
    for (const auto& [eid, sign] : signs) s[eid] = sign > 0 ? "+" : "-";
    bp[vid] = s;
  }
  j["bipartitions"] = bp;
  j["levels"] = cert.levels;
  j["epsilons"] = cert.epsilons;
  return j.dump(2) + "\n";
}

std::string obstruction_to_json(const Obstruction& obs) {
  json j;
  j["kind"] = obstruction_kind_name(obs.kind);
  switch (obs.kind) {
    case Obstruction::Kind::EndpointPresent:
      j["vertex"] = obs.vertex;
      break;
    case Obstruction::Kind::OddMicroCycle:
      j["vertex"] = obs.vertex;
      j["micro_cycle"] = obs.micro_cycle;
      break;
    case Obstruction::Kind::ParityContradiction: {
      j["start"] = {{"vertex", obs.walk_start_vertex}, {"edge", obs.walk_start_edge}};
      json steps = json::array();
      for (const auto& s : obs.walk)
        steps.push_back({{"kind", s.micro ? "micro" : "macro"}, {"id", s.id}, {"at", s.at_vertex}});
      j["walk"] = steps;
      break;
    }
    case Obstruction::Kind::OrientedMonochromeCycle: {
      j["cycle"] = obs.cycle;
      json dir = json::object();
      for (const auto& [eid, d] : obs.orientation.dir)
        dir[eid] = {end_to_json(d[0]), end_to_json(d[1])};
      j["orientation"] = dir;
      break;
    }
  }
  return j.dump(2) + "\n";
}

std::string result_to_json(const GlobalResult& result) {
  if (std::holds_alternative<EulerianCertificate>(result))
    return certificate_to_json(std::get<EulerianCertificate>(result));
  return obstruction_to_json(std::get<Obstruction>(result));
}

std::string config_to_dot(const GraphicalConfiguration& config) {
  Multigraph mu = build_main_graph(config);
  std::ostringstream os;
  os << "graph main {\n";
  os << "  node [shape=circle, fontsize=10];\n";
  for (int i = 0; i < mu.n; ++i) {
    bool open = mu.vertex_labels[i].rfind("open|", 0) == 0;
    os << "  n" << i << " [label=\"" << mu.vertex_labels[i] << "\""
       << (open ? ", shape=point" : "") << "];\n";
  }
  for (std::size_t k = 0; k < mu.edges.size(); ++k) {
    bool micro = true;  // micro-edges come first in build_main_graph
    if (config.edge(mu.edge_labels[k]) != nullptr) micro = false;
    os << "  n" << mu.edges[k].first << " -- n" << mu.edges[k].second << " [label=\""
       << mu.edge_labels[k] << "\"" << (micro ? ", style=dashed" : "") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace foliagraph
