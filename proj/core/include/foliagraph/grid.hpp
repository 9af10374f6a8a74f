#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "foliagraph/errors.hpp"

namespace foliagraph {

// Axis-aligned box with per-axis node counts; spacing is uniform per axis.
struct GridSpec {
  int dim = 2;
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{1, 1, 0};
  std::array<int, 3> n{2, 2, 1};

  double spacing(int axis) const { return (hi[axis] - lo[axis]) / (n[axis] - 1); }
  double max_spacing() const;
  std::size_t node_count() const { return std::size_t(n[0]) * n[1] * (dim == 3 ? n[2] : 1); }
  // node-major, x fastest
  std::size_t index(int i, int j, int k = 0) const {
    return std::size_t(k) * n[0] * n[1] + std::size_t(j) * n[0] + i;
  }
  double coord(int axis, int i) const { return lo[axis] + spacing(axis) * i; }
};

struct ScalarGrid {
  GridSpec spec;
  std::vector<double> values;  // NaN at masked nodes

  double& at(int i, int j, int k = 0) { return values[spec.index(i, j, k)]; }
  double at(int i, int j, int k = 0) const { return values[spec.index(i, j, k)]; }
};

struct SampledOneForm {
  GridSpec spec;
  // components[0..dim-1]; 2D: (g, h), 3D: (w1, w2, w3)
  std::array<std::vector<double>, 3> components;
  std::vector<std::uint8_t> mask;  // 1 = inside the domain

  bool inside(std::size_t node) const { return mask[node] != 0; }
  bool inside(int i, int j, int k = 0) const { return mask[spec.index(i, j, k)] != 0; }
  double comp(int c, int i, int j, int k = 0) const { return components[c][spec.index(i, j, k)]; }
  double norm_at(std::size_t node) const;
};

// Grid CSV: one value per line, node-major with x fastest; masked nodes are
// written as nan. The JSON header carries {box, counts, mask}.
std::string grid_to_csv(const ScalarGrid& grid, const std::vector<std::uint8_t>* mask = nullptr);
std::string grid_header_json(const GridSpec& spec, const std::vector<std::uint8_t>& mask);
std::string form_to_csv(const SampledOneForm& form);

}  // namespace foliagraph
