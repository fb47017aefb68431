#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/complex.hpp"
#include "rsl/point_cloud.hpp"
#include "rsl/rips.hpp"

namespace rsl {

/// Closed convex hulls of vertex sets of a point cloud.
struct ConvexCellSystem {
  PointCloud coords;
  CliqueList cells;

  ConvexCellSystem() = default;
  ConvexCellSystem(PointCloud coords, CliqueList cells);
  std::size_t size() const { return cells.size(); }
};

/// Whether the closed hulls of the listed cells share a point. Decided by
/// exact rational feasibility; coordinates are converted without rounding.
bool hulls_intersect(const ConvexCellSystem& cells, std::span<const std::size_t> ids);

/// Nerve of the hulls; vertex i is cell i.
struct NerveComplex {
  SimplicialComplex complex;
  std::vector<Simplex> cells;  ///< cell id -> vertex set in the point cloud

  nlohmann::json to_json() const;
};

NerveComplex build_nerve(const ConvexCellSystem& cells, int cap = kDefaultCap);

/// Whether x lies in some cell's closed hull (exact).
bool shadow_contains(const ConvexCellSystem& cells, std::span<const double> x);

struct BarycentricPoint {
  Simplex carrier;
  std::vector<double> weights;
};

/// Linear image sum(lambda_i * p_i) of a point of the geometric realization.
Point project_point(const SimplicialComplex& complex, const PointCloud& coords,
                    const BarycentricPoint& b);

struct RasterBetti {
  int b0 = 0;
  int b1 = 0;
  int resolution = 0;  ///< finest resolution used
};

/// Betti numbers of the union of hulls in the plane by rasterization:
/// a pixel is foreground when its closed square meets a hull; b0 counts
/// 8-connected foreground components, b1 bounded 4-connected background
/// components. The resolution doubles from `resolution` until two
/// consecutive answers agree; InconclusiveError past 4096.
RasterBetti raster_betti_2d(const ConvexCellSystem& cells, int resolution = 64,
                            const std::string& pgm_path = {});

}  // namespace rsl
