#include "foliagraph/strip_svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace foliagraph {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const StripComplex& complex) {
  // layout: strips on a row, 80 wide, 160 tall, 40 apart; top/bottom slots
  // ticked along the horizontal edges
  const double W = 80, H = 160, GAP = 40, X0 = 30, Y0 = 40;

  std::vector<std::string> ids;
  for (const auto& [eid, s] : complex.strips) ids.push_back(eid);
  std::sort(ids.begin(), ids.end());
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < ids.size(); ++i) col[ids[i]] = static_cast<int>(i);

  double width = X0 * 2 + (ids.empty() ? 0 : ids.size() * W + (ids.size() - 1) * GAP);
  double height = Y0 * 2 + H + 60;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width)
     << "\" height=\"" << fmt(height) << "\">\n";

  auto slot_xy = [&](const SlotRef& r) {
    const auto& s = complex.strips.at(r.edge);
    int n = r.side == "top" ? s.k : s.l;
    double x = X0 + col[r.edge] * (W + GAP) + W * (r.slot - 0.5) / n;
    double y = r.side == "top" ? Y0 : Y0 + H;
    return std::pair<double, double>{x, y};
  };

  for (const auto& eid : ids) {
    const auto& s = complex.strips.at(eid);
    double x = X0 + col[eid] * (W + GAP);
    os << "  <rect x=\"" << fmt(x) << "\" y=\"" << fmt(Y0) << "\" width=\"" << fmt(W)
       << "\" height=\"" << fmt(H) << "\" fill=\"#f2f2f2\" stroke=\"black\"/>\n";
    os << "  <text x=\"" << fmt(x + W / 2) << "\" y=\"" << fmt(Y0 + H / 2)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << eid << "</text>\n";
    for (int a = 1; a < s.k; ++a)
      os << "  <line x1=\"" << fmt(x + W * a / s.k) << "\" y1=\"" << fmt(Y0 - 5) << "\" x2=\""
         << fmt(x + W * a / s.k) << "\" y2=\"" << fmt(Y0 + 5) << "\" stroke=\"black\"/>\n";
    for (int a = 1; a < s.l; ++a)
      os << "  <line x1=\"" << fmt(x + W * a / s.l) << "\" y1=\"" << fmt(Y0 + H - 5) << "\" x2=\""
         << fmt(x + W * a / s.l) << "\" y2=\"" << fmt(Y0 + H + 5) << "\" stroke=\"black\"/>\n";
  }

  for (const auto& ident : complex.identifications) {
    auto [xa, ya] = slot_xy(ident.a);
    auto [xb, yb] = slot_xy(ident.b);
    double lift = ya == Y0 ? -30 : 30;  // arc above for top gluings, below for bottom
    if (ya != yb) lift = 0;
    double cx = (xa + xb) / 2, cy = (ya + yb) / 2 + lift;
    os << "  <path d=\"M " << fmt(xa) << " " << fmt(ya) << " Q " << fmt(cx) << " " << fmt(cy)
       << " " << fmt(xb) << " " << fmt(yb) << "\" fill=\"none\" stroke=\"#3366cc\""
       << (ident.flip ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    os << "  <text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy - 3)
       << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"#3366cc\">" << ident.micro
       << (ident.flip ? " (flip)" : "") << "</text>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace foliagraph
