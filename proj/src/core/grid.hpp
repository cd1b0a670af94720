#pragma once

#include <string>
#include <vector>

#include "core/types.hpp"

#include "json.hpp"

namespace g2k {

enum class GridKind { Uniform, Geometric, Custom };

// Strictly increasing positive sample points with optional positive
// quadrature weights of matching length.
struct SampleGrid {
  std::vector<double> points;
  std::vector<double> weights;  // may be empty
  GridKind kind = GridKind::Custom;

  int size() const { return int(points.size()); }
  bool has_weights() const { return !weights.empty(); }
  void validate() const;

  nlohmann::json to_json() const;
};

// uniform: n equally spaced points on [lo,hi] with trapezoid weights;
// geometric: n log-equally-spaced points with log-trapezoid weights.
SampleGrid make_grid(GridKind kind, int n, double lo, double hi);

GridKind grid_kind_from_string(const std::string& s);
std::string to_string(GridKind k);

}  // namespace g2k
