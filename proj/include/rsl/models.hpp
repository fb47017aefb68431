#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/metric.hpp"
#include "rsl/point_cloud.hpp"

namespace rsl {

enum class ModelKind { Circle, Trefoil, Theta, EmbeddedGraph, ParametricCurve };

struct Projection {
  Point point;
  double param = 0.0;  ///< arc-length parameter of the footpoint
  double distance = 0.0;
};

/// Regularity constants of a model space.
///
///   eta   normal slices meet the curve only at the footpoint within this radius
///   rho   maps closer than rho (geodesically) are homotopic
///   xi    d_M(p,q) <= xi * |p-q| whenever |p-q| < delta
///   eps_r nearest-point projection moves points of the r-tube by at most eps_r
///
/// eta and reach are NaN for models that are not smooth curves.
struct ModelConstants {
  double eta = 0.0;
  double rho = 0.0;
  double delta = 0.0;
  double xi = 1.0;
  double reach = 0.0;
  bool numeric = false;
  std::string certification;

  double eps_r(double t) const { return t; }
};

namespace detail {
class ModelImpl;
}

/// A ground-truth compact space in R^N with an arc-length parametrization,
/// nearest-point projection and geodesic metric. Cheap to copy; immutable.
class ModelSpace {
 public:
  /// Smooth closed curve given by a 2*pi-periodic map with its first two
  /// derivatives: fn(u, pos, d1, d2) writes dim() doubles into each.
  using CurveFn = std::function<void(double u, double* pos, double* d1, double* d2)>;

  static ModelSpace circle(double radius, std::size_t dim = 2, Point center = {});
  static ModelSpace trefoil(double scale);
  static ModelSpace parametric_curve(std::size_t dim, CurveFn fn, std::string name);
  static ModelSpace embedded_graph(PointCloud vertices,
                                   std::vector<std::pair<Index, Index>> segments);
  /// Two branch vertices joined by three arcs; first Betti number 2.
  static ModelSpace theta_graph(double scale = 1.0);

  static ModelSpace from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  ModelKind kind() const;
  std::string kind_name() const;
  std::size_t ambient_dim() const;
  double length() const;
  bool is_closed_curve() const;

  Point point_at(double t) const;
  Projection project(std::span<const double> x) const;
  double geodesic(double s, double t) const;
  MetricMatrix geodesic_metric(std::span<const double> params) const;
  /// Orthonormal basis of the normal space at parameter t.
  std::vector<Point> normal_basis(double t) const;
  /// Radius of the tube on which noise may be drawn and projection is unique.
  double tube_radius() const;
  /// Smallest z such that every point of the model lies within geodesic
  /// distance z of one of the given footpoints.
  double density_radius(std::span<const double> params) const;
  std::vector<int> betti() const;
  /// Supremum of admissible delta values in the metric comparison constants.
  double delta_max() const;
  ModelConstants constants(double delta) const;
  /// Points at parameters 0, h, 2h, ... with h <= spacing.
  PointCloud discretize(double spacing) const;

 private:
  explicit ModelSpace(std::shared_ptr<const detail::ModelImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::ModelImpl> impl_;
};

enum class SampleScheme {
  Stratified,        ///< parameters k*L/n
  UniformArc,        ///< i.i.d. uniform parameters
  DenseEnumeration,  ///< bit-reversal order; every prefix is well spread
};

SampleScheme parse_scheme(const std::string& s);
std::string scheme_name(SampleScheme s);

struct SamplerSpec {
  ModelSpace model;
  std::size_t count = 0;
  double tau = 0.0;  ///< noise radius, uniform in the normal disk
  std::uint64_t seed = 0;
  SampleScheme scheme = SampleScheme::Stratified;
};

struct Sample {
  PointCloud points;
  std::vector<double> params;  ///< footpoint parameters before noise
};

Sample sample_with_footpoints(const SamplerSpec& spec);
PointCloud sample(const SamplerSpec& spec);

/// Uniform double in [0,1) from a 64-bit engine; identical on every platform.
double unit_uniform(std::uint64_t bits);

}  // namespace rsl
