#include "core/grid.hpp"

#include <cmath>

namespace g2k {

void SampleGrid::validate() const {
  require(points.size() >= 1, ErrorCode::InvalidArgument, "empty grid");
  double prev = 0.0;
  for (double p : points) {
    require(p > prev, ErrorCode::InvalidArgument,
            "grid points must be strictly increasing and positive");
    prev = p;
  }
  if (!weights.empty()) {
    require(weights.size() == points.size(), ErrorCode::InvalidArgument,
            "weights/points length mismatch");
    for (double w : weights)
      require(w > 0.0, ErrorCode::InvalidArgument, "weights must be positive");
  }
}

SampleGrid make_grid(GridKind kind, int n, double lo, double hi) {
  require(n >= 2, ErrorCode::InvalidArgument, "grid needs n >= 2");
  require(lo > 0.0, ErrorCode::InvalidArgument, "grid needs lo > 0");
  require(hi > lo, ErrorCode::InvalidArgument, "grid needs hi > lo");
  SampleGrid g;
  g.kind = kind;
  g.points.resize(n);
  g.weights.resize(n);
  if (kind == GridKind::Uniform) {
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      g.points[i] = lo + h * i;
      g.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
  } else if (kind == GridKind::Geometric) {
    const double hy = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      g.points[i] = lo * std::exp(hy * i);
      const double edge = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      g.weights[i] = edge * hy * g.points[i];
    }
    g.points[n - 1] = hi;  // exact endpoint
  } else {
    fail(ErrorCode::InvalidArgument, "make_grid: kind must be uniform or geometric");
  }
  g.validate();
  return g;
}

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "uniform") return GridKind::Uniform;
  if (s == "geometric") return GridKind::Geometric;
  if (s == "custom") return GridKind::Custom;
  fail(ErrorCode::ParseError, "unknown grid kind: " + s);
}

std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::Uniform: return "uniform";
    case GridKind::Geometric: return "geometric";
    case GridKind::Custom: return "custom";
  }
  return "custom";
}

nlohmann::json SampleGrid::to_json() const {
  nlohmann::json j;
  j["kind"] = g2k::to_string(kind);
  j["n"] = points.size();
  if (!points.empty()) {
    j["lo"] = points.front();
    j["hi"] = points.back();
  }
  return j;
}

}  // namespace g2k
