#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rsl/models.hpp"
#include "rsl/point_cloud.hpp"

namespace rsl::test {

inline PointCloud random_cloud(std::mt19937_64& g, std::size_t n, std::size_t dim = 2, double side = 1.0) {
  PointCloud c(dim);
  Point p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : p) x = side * unit_uniform(g());
    c.push_back(p);
  }
  return c;
}

inline PointCloud unit_square() { return PointCloud::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * unit_uniform(g()); }

}  // namespace rsl::test
