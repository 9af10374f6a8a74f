#include "foliagraph/analyze.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace foliagraph {

AnalysisResult analyze(const SampledOneForm& form, const AnalyzeOptions& opts) {
  AnalysisResult res;

  if (opts.allow_fastpath && cylinder_fastpath(form, opts.fastpath_ratio_cap)) {
    res.fastpath = true;
    res.graph.config = single_edge_configuration();
    res.decision = solve_global(res.graph.config);
    return res;
  }

  res.net = build_transversal_net(form, opts.net);
  res.field = classify_leaves(res.net, form, opts.classify);
  res.pairs = detect_inseparable(res.field, res.net, form, opts.detect);
  res.endpoints = detect_endpoints(res.field, res.net);
  res.graph = build_configuration(res.field, res.net, form, res.pairs, res.endpoints, opts.build);
  res.decision = solve_global(res.graph.config);

  if (res.decision && eulerian(*res.decision) && !res.graph.config.edges.empty()) {
    const auto& cert = std::get<EulerianCertificate>(*res.decision);
    try {
      ScalarGrid f = build_f(res.graph, cert, res.field, form);
      res.multiplier = compute_lambda(f, form);
    } catch (const ChartGapError& e) {
      res.multiplier_error = e.what();  // decision stands, f stays unavailable
    }
  }
  return res;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
                          "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd"};

}  // namespace

std::string leaves_svg(const LeafField& field, const SampledOneForm& form,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
  const GridSpec& s = form.spec;
  const double W = 640;
  double aspect = (s.hi[1] - s.lo[1]) / (s.hi[0] - s.lo[0]);
  const double H = W * aspect;
  auto px = [&](Vec2 p) {
    return Vec2{(p.x - s.lo[0]) / (s.hi[0] - s.lo[0]) * W,
                H - (p.y - s.lo[1]) / (s.hi[1] - s.lo[1]) * H};
  };

  std::set<std::string> bold;
  for (const auto& [a, b] : pairs) {
    bold.insert(a);
    bold.insert(b);
  }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(W)
     << "\" height=\"" << fmt(H) << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(W) << "\" height=\"" << fmt(H)
     << "\" fill=\"white\"/>\n";

  // masked cells in gray
  for (int j = 0; j + 1 < s.n[1]; ++j)
    for (int i = 0; i + 1 < s.n[0]; ++i) {
      if (form.inside(i, j) && form.inside(i + 1, j) && form.inside(i, j + 1) &&
          form.inside(i + 1, j + 1))
        continue;
      Vec2 a = px({s.coord(0, i), s.coord(1, j + 1)});
      os << "  <rect x=\"" << fmt(a.x) << "\" y=\"" << fmt(a.y) << "\" width=\""
         << fmt(W * s.spacing(0) / (s.hi[0] - s.lo[0])) << "\" height=\""
         << fmt(H * s.spacing(1) / (s.hi[1] - s.lo[1])) << "\" fill=\"#dddddd\"/>\n";
    }

  for (std::size_t c = 0; c < field.classes.size(); ++c) {
    const LeafClass& cl = field.classes[c];
    if (cl.representative < 0) continue;
    const auto& pts = field.traces[cl.representative].pts;
    if (pts.size() < 2) continue;
    bool b = bold.count(cl.id) != 0;
    os << "  <polyline fill=\"none\" stroke=\"" << kPalette[c % 10] << "\" stroke-width=\""
       << (b ? "2.5" : "0.8") << "\" points=\"";
    // thin long polylines down for readability
    std::size_t stride = std::max<std::size_t>(1, pts.size() / 512);
    for (std::size_t k = 0; k < pts.size(); k += stride) {
      Vec2 p = px(pts[k]);
      os << fmt(p.x) << "," << fmt(p.y) << " ";
    }
    Vec2 last = px(pts.back());
    os << fmt(last.x) << "," << fmt(last.y);
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string charts_to_json(const LeafSpaceGraph& graph) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [eid, entries] : graph.charts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) arr.push_back({{"classId", e.class_id}, {"t", e.t}});
    j[eid] = arr;
  }
  return j.dump(2) + "\n";
}

}  // namespace foliagraph
