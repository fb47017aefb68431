#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rsl/point_cloud.hpp"

namespace rsl {

/// Dense symmetric distance matrix of a finite metric space. Entries may be
/// +infinity, which encodes points in different components of a path metric.
class MetricMatrix {
 public:
  MetricMatrix() = default;
  explicit MetricMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  /// Validates symmetry, zero diagonal and nonnegativity (exact comparisons).
  static MetricMatrix from_entries(std::size_t n, std::vector<double> row_major);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  bool has_infinite() const;
  double max_finite() const;

  /// First triple (i, j, k) with d(i,k) > d(i,j) + d(j,k) + tol, if any.
  std::optional<std::array<std::size_t, 3>> triangle_violation(double tol = 1e-12) const;

  MetricMatrix restrict_to(std::span<const Index> ids) const;
  MetricMatrix prefix(std::size_t n) const;

  const std::vector<double>& entries() const { return d_; }
  bool operator==(const MetricMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

MetricMatrix euclidean_metric(const PointCloud& cloud);

/// Shortest-path metric on the graph joining points closer than eps (strict),
/// edges weighted by Euclidean length. Pairs closer than eps keep their
/// Euclidean distance exactly; disconnected pairs are +infinity.
MetricMatrix epsilon_path_metric(const PointCloud& cloud, double eps);

/// Exact Hausdorff distance between two finite nonempty sets.
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

}  // namespace rsl
