#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "rsl/complex.hpp"
#include "rsl/metric.hpp"
#include "rsl/shadow.hpp"

namespace rsl {

/// Budgets for the brute-force oracles. These run slow, independent
/// algorithms and exist only to cross-check the main pipeline.
struct OracleConfig {
  std::size_t rips_max_points = 20;
  std::size_t homology_max_simplices = 5000;
  int hull_resolution = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Every vertex subset of size <= cap+1 with all pairwise distances < beta.
/// Refuses (PreconditionError) above config.rips_max_points points.
SimplicialComplex brute_rips(const MetricMatrix& metric, double beta, int cap,
                             const OracleConfig& config = {});

/// Z/2 Betti number in dimension m by dense Gaussian elimination of the two
/// adjacent boundary matrices. Refuses above config.homology_max_simplices.
int brute_homology(const SimplicialComplex& complex, int m, const OracleConfig& config = {});

/// First grid point (in scan order) lying in every listed hull. The grid
/// spans the intersection of the cells' bounding boxes with
/// resolution+1 points per axis; membership is exact. A miss is advisory:
/// thin intersections can fall between grid points.
std::optional<Point> brute_hull_witness(const ConvexCellSystem& cells, std::span<const std::size_t> ids,
                                        int resolution);

bool brute_hull_intersection(const ConvexCellSystem& cells, std::span<const std::size_t> ids,
                             int resolution);

}  // namespace rsl
