#include "foliagraph/strip.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

namespace foliagraph {

using nlohmann::json;

double local_form(double x) { return std::sin(2.0 * M_PI * x); }

namespace {

// Side of edge `eid` facing vertex v under the orientation: "top" when the
// tail is at v, "bottom" when the head is.
std::string side_at(const Orientation& orientation, const std::string& eid, const std::string& v) {
  const auto& t = orientation.tail(eid);
  if (!t.open() && t.name() == v) return "top";
  return "bottom";
}

}  // namespace

StripComplex synthesize(const GraphicalConfiguration& config, const Orientation& orientation) {
  for (const auto& v : config.vertices)
    if (v.endpoint) throw EndpointError("configuration has endpoint vertex " + v.id);

  StripComplex complex;

  // Slot counts: per edge end, the number of micro-edges limiting onto it at
  // the end's vertex; open or untouched ends keep a single unglued slot.
  // Slot order is by sorted micro-edge id.
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> slots;  // (edge, side) -> micro ids
  for (const auto& v : config.vertices) {
    auto micros = config.micro_at(v.id);
    std::sort(micros.begin(), micros.end(),
              [](const MicroEdge& a, const MicroEdge& b) { return a.id < b.id; });
    for (const auto& m : micros)
      for (const auto& eid : m.ends) slots[{eid, side_at(orientation, eid, v.id)}].push_back(m.id);
  }

  for (const auto& e : config.edges) {
    StripComplex::Strip s;
    auto top = slots.find({e.id, "top"});
    auto bot = slots.find({e.id, "bottom"});
    s.k = top == slots.end() ? 1 : static_cast<int>(top->second.size());
    s.l = bot == slots.end() ? 1 : static_cast<int>(bot->second.size());
    complex.strips[e.id] = s;
  }

  auto slot_of = [&](const std::string& eid, const std::string& side, const std::string& micro) {
    const auto& lst = slots.at({eid, side});
    auto it = std::find(lst.begin(), lst.end(), micro);
    return SlotRef{eid, side, static_cast<int>(it - lst.begin()) + 1};
  };

  std::vector<std::string> verts;
  for (const auto& v : config.vertices) verts.push_back(v.id);
  std::sort(verts.begin(), verts.end());
  for (const auto& vid : verts) {
    auto micros = config.micro_at(vid);
    std::sort(micros.begin(), micros.end(),
              [](const MicroEdge& a, const MicroEdge& b) { return a.id < b.id; });
    for (const auto& m : micros) {
      Identification ident;
      std::string side_a = side_at(orientation, m.ends[0], vid);
      std::string side_b = side_at(orientation, m.ends[1], vid);
      ident.a = slot_of(m.ends[0], side_a, m.id);
      ident.b = slot_of(m.ends[1], side_b, m.id);
      ident.flip = side_a == side_b;  // both tails or both heads meet here
      ident.micro = m.id;
      complex.identifications.push_back(ident);
    }
  }
  return complex;
}

GraphicalConfiguration extract_configuration(const StripComplex& complex) {
  GraphicalConfiguration config;

  // Strips become macro-edges verbatim.
  std::vector<std::string> strip_ids;
  for (const auto& [eid, s] : complex.strips) strip_ids.push_back(eid);
  std::sort(strip_ids.begin(), strip_ids.end());

  // Cluster strip ends through identifications: each cluster of ends joined
  // by gluings is one macro-vertex; unglued ends are open.
  std::map<std::pair<std::string, std::string>, int> end_idx;
  std::vector<std::pair<std::string, std::string>> ends;
  for (const auto& eid : strip_ids)
    for (const char* side : {"top", "bottom"}) {
      end_idx[{eid, side}] = static_cast<int>(ends.size());
      ends.push_back({eid, side});
    }

  std::vector<int> parent(ends.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::set<int> glued;
  for (const auto& ident : complex.identifications) {
    int a = end_idx.at({ident.a.edge, ident.a.side});
    int b = end_idx.at({ident.b.edge, ident.b.side});
    parent[std::max(find(a), find(b))] = std::min(find(a), find(b));
    glued.insert(a);
    glued.insert(b);
  }

  std::map<int, std::string> vertex_of_root;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (!glued.count(static_cast<int>(i))) continue;
    int r = find(static_cast<int>(i));
    if (!vertex_of_root.count(r)) {
      std::string vid = "v" + std::to_string(vertex_of_root.size());
      vertex_of_root[r] = vid;
      config.vertices.push_back({vid, false});
    }
  }

  for (const auto& eid : strip_ids) {
    Edge e;
    e.id = eid;
    for (int side = 0; side < 2; ++side) {
      int i = end_idx.at({eid, side == 0 ? "top" : "bottom"});
      if (glued.count(i))
        e.ends[side] = vertex_end(vertex_of_root.at(find(i)));
      else
        e.ends[side] = open_end();
    }
    config.edges.push_back(e);
  }

  for (const auto& ident : complex.identifications) {
    int a = end_idx.at({ident.a.edge, ident.a.side});
    const std::string& vid = vertex_of_root.at(find(a));
    config.micrographs[vid].push_back({ident.micro, {ident.a.edge, ident.b.edge}});
  }
  return config;
}

std::string strip_complex_to_json(const StripComplex& complex) {
  json j;
  j["strips"] = json::object();
  for (const auto& [eid, s] : complex.strips) j["strips"][eid] = {{"k", s.k}, {"l", s.l}};
  json arr = json::array();
  for (const auto& ident : complex.identifications) {
    arr.push_back({{"a", {ident.a.edge, ident.a.side, ident.a.slot}},
                   {"b", {ident.b.edge, ident.b.side, ident.b.slot}},
                   {"flip", ident.flip},
                   {"micro", ident.micro}});
  }
  j["identifications"] = arr;
  return j.dump(2) + "\n";
}

StripComplex strip_complex_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("strip complex is not valid JSON: ") + e.what());
  }
  StripComplex complex;
  if (!j.is_object() || !j.contains("strips") || !j["strips"].is_object())
    throw Error("strip complex schema error at /strips");
  for (const auto& [eid, js] : j["strips"].items()) {
    if (!js.contains("k") || !js.contains("l")) throw Error("strip complex schema error at /strips/" + eid);
    complex.strips[eid] = {js["k"].get<int>(), js["l"].get<int>()};
  }
  if (j.contains("identifications")) {
    for (const auto& ji : j["identifications"]) {
      auto ref = [&](const json& r) {
        return SlotRef{r[0].get<std::string>(), r[1].get<std::string>(), r[2].get<int>()};
      };
      complex.identifications.push_back(
          {ref(ji["a"]), ref(ji["b"]), ji["flip"].get<bool>(), ji["micro"].get<std::string>()});
    }
  }
  return complex;
}

}  // namespace foliagraph
