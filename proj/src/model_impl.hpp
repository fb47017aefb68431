#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "rsl/models.hpp"

namespace rsl::detail {

class ModelImpl {
 public:
  virtual ~ModelImpl() = default;

  virtual ModelKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double length() const = 0;
  virtual bool closed_curve() const = 0;
  virtual Point point_at(double t) const = 0;
  virtual Projection project(std::span<const double> x) const = 0;
  virtual double geodesic(double s, double t) const = 0;
  virtual std::vector<Point> normal_basis(double t) const = 0;
  virtual double tube_radius() const = 0;
  virtual std::vector<int> betti() const = 0;
  virtual double delta_max() const = 0;
  virtual ModelConstants constants(double delta) const = 0;
  virtual nlohmann::json to_json() const = 0;

  virtual MetricMatrix geodesic_metric(std::span<const double> params) const;
  virtual double density_radius(std::span<const double> params) const;
};

inline double wrap_param(double t, double length) {
  double r = std::fmod(t, length);
  if (r < 0) r += length;
  if (r >= length) r = 0.0;
  return r;
}

inline double cyclic_distance(double s, double t, double length) {
  double d = std::fabs(wrap_param(s, length) - wrap_param(t, length));
  return std::min(d, length - d);
}

/// Half the largest cyclic gap between sorted parameters of a closed curve.
double closed_curve_density(std::span<const double> params, double length);

/// Orthonormal completion of a unit tangent in R^dim.
std::vector<Point> normal_complement(const Point& unit_tangent);

std::shared_ptr<const ModelImpl> make_circle(double radius, std::size_t dim, Point center);
std::shared_ptr<const ModelImpl> make_numeric_curve(std::size_t dim, ModelSpace::CurveFn fn,
                                                    ModelKind kind, nlohmann::json params);
std::shared_ptr<const ModelImpl> make_graph(PointCloud vertices,
                                            std::vector<std::pair<Index, Index>> segments,
                                            ModelKind kind, nlohmann::json params);

}  // namespace rsl::detail
