#include "foliagraph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace foliagraph {

double GridSpec::max_spacing() const {
  double h = 0;
  for (int a = 0; a < dim; ++a) h = std::max(h, spacing(a));
  return h;
}

double SampledOneForm::norm_at(std::size_t node) const {
  double s = 0;
  for (int c = 0; c < spec.dim; ++c) s += components[c][node] * components[c][node];
  return std::sqrt(s);
}

namespace {

void append_value(std::string& out, double v) {
  char buf[40];
  if (std::isnan(v)) {
    out += "nan";
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  }
  out += '\n';
}

}  // namespace

std::string grid_to_csv(const ScalarGrid& grid, const std::vector<std::uint8_t>* mask) {
  std::string out;
  out.reserve(grid.values.size() * 12);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (mask && !(*mask)[i]) {
      out += "nan\n";
      continue;
    }
    append_value(out, grid.values[i]);
  }
  return out;
}

std::string form_to_csv(const SampledOneForm& form) {
  std::string out;
  for (std::size_t i = 0; i < form.spec.node_count(); ++i) {
    if (!form.inside(i)) {
      out += "nan";
      for (int c = 1; c < form.spec.dim; ++c) out += ",nan";
      out += '\n';
      continue;
    }
    char buf[40];
    for (int c = 0; c < form.spec.dim; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", form.components[c][i]);
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string grid_header_json(const GridSpec& spec, const std::vector<std::uint8_t>& mask) {
  nlohmann::json j;
  nlohmann::json box = nlohmann::json::array();
  nlohmann::json counts = nlohmann::json::array();
  for (int a = 0; a < spec.dim; ++a) {
    box.push_back(spec.lo[a]);
    box.push_back(spec.hi[a]);
    counts.push_back(spec.n[a]);
  }
  j["box"] = box;
  j["counts"] = counts;
  // masked-out node indices only; usually a thin set
  nlohmann::json masked = nlohmann::json::array();
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) masked.push_back(i);
  j["mask"] = masked;
  return j.dump(2) + "\n";
}

}  // namespace foliagraph
