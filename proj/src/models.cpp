#include "rsl/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "model_impl.hpp"
#include "rsl/error.hpp"

namespace rsl {

namespace detail {

MetricMatrix ModelImpl::geodesic_metric(std::span<const double> params) const {
  MetricMatrix m(params.size());
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j) m.set(i, j, geodesic(params[i], params[j]));
  return m;
}

double ModelImpl::density_radius(std::span<const double> params) const {
  return closed_curve_density(params, length());
}

double closed_curve_density(std::span<const double> params, double length) {
  if (params.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> t(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) t[i] = wrap_param(params[i], length);
  std::sort(t.begin(), t.end());
  double gap = t.front() + length - t.back();
  for (std::size_t i = 1; i < t.size(); ++i) gap = std::max(gap, t[i] - t[i - 1]);
  return gap / 2.0;
}

std::vector<Point> normal_complement(const Point& unit_tangent) {
  const std::size_t n = unit_tangent.size();
  std::vector<Point> basis{unit_tangent};
  // Standard basis vectors in order of increasing alignment with the tangent.
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(unit_tangent[a]) < std::fabs(unit_tangent[b]);
  });
  for (std::size_t k : order) {
    if (basis.size() == n) break;
    Point v(n, 0.0);
    v[k] = 1.0;
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += v[i] * b[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * b[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  basis.erase(basis.begin());
  return basis;
}

namespace {

class CircleModel final : public ModelImpl {
 public:
  CircleModel(double r, std::size_t dim, Point center) : r_(r), dim_(dim), c_(std::move(center)) {
    if (!(r_ > 0.0) || !std::isfinite(r_)) throw PreconditionError("circle radius must be positive");
    if (dim_ < 2) throw PreconditionError("circle needs ambient dimension >= 2");
    if (c_.empty()) c_.assign(dim_, 0.0);
    if (c_.size() != dim_) throw PreconditionError("circle center dimension mismatch");
  }

  ModelKind kind() const override { return ModelKind::Circle; }
  std::size_t dim() const override { return dim_; }
  double length() const override { return 2.0 * std::numbers::pi * r_; }
  bool closed_curve() const override { return true; }

  Point point_at(double t) const override {
    double theta = wrap_param(t, length()) / r_;
    Point p = c_;
    p[0] += r_ * std::cos(theta);
    p[1] += r_ * std::sin(theta);
    return p;
  }

  Projection project(std::span<const double> x) const override {
    if (x.size() != dim_) throw PreconditionError("projection dimension mismatch");
    double vx = x[0] - c_[0], vy = x[1] - c_[1];
    double rad = std::hypot(vx, vy);
    if (rad == 0.0)
      throw AmbiguityError("point lies on the circle's medial axis; every circle point is nearest");
    Projection out;
    out.point = c_;
    out.point[0] += r_ * (vx / rad);
    out.point[1] += r_ * (vy / rad);
    double theta = std::atan2(vy, vx);
    if (theta < 0) theta += 2.0 * std::numbers::pi;
    out.param = wrap_param(r_ * theta, length());
    out.distance = distance(x, out.point);
    return out;
  }

  double geodesic(double s, double t) const override { return cyclic_distance(s, t, length()); }

  std::vector<Point> normal_basis(double t) const override {
    double theta = wrap_param(t, length()) / r_;
    std::vector<Point> basis;
    Point radial(dim_, 0.0);
    radial[0] = std::cos(theta);
    radial[1] = std::sin(theta);
    basis.push_back(radial);
    for (std::size_t k = 2; k < dim_; ++k) {
      Point e(dim_, 0.0);
      e[k] = 1.0;
      basis.push_back(e);
    }
    return basis;
  }

  double tube_radius() const override { return r_; }
  std::vector<int> betti() const override { return {1, 1}; }
  double delta_max() const override { return 2.0 * r_; }

  ModelConstants constants(double delta) const override {
    if (!(delta > 0.0) || delta >= 2.0 * r_)
      throw PreconditionError("circle constants need 0 < delta < 2r (asin domain)");
    ModelConstants k;
    k.eta = 2.0 * r_;
    k.rho = std::numbers::pi * r_;
    k.delta = delta;
    k.xi = 2.0 * r_ * std::asin(delta / (2.0 * r_)) / delta;
    k.reach = r_;
    k.numeric = false;
    k.certification = "analytic";
    return k;
  }

  nlohmann::json to_json() const override {
    return {{"kind", "circle"}, {"params", {{"radius", r_}, {"dim", dim_}, {"center", c_}}}};
  }

 private:
  double r_;
  std::size_t dim_;
  Point c_;
};

}  // namespace

std::shared_ptr<const ModelImpl> make_circle(double radius, std::size_t dim, Point center) {
  return std::make_shared<CircleModel>(radius, dim, std::move(center));
}

}  // namespace detail

ModelSpace ModelSpace::circle(double radius, std::size_t dim, Point center) {
  return ModelSpace(detail::make_circle(radius, dim, std::move(center)));
}

ModelSpace ModelSpace::trefoil(double scale) {
  if (!(scale > 0.0)) throw PreconditionError("trefoil scale must be positive");
  auto fn = [scale](double u, double* p, double* d1, double* d2) {
    double s1 = std::sin(u), c1 = std::cos(u);
    double s2 = std::sin(2 * u), c2 = std::cos(2 * u);
    double s3 = std::sin(3 * u), c3 = std::cos(3 * u);
    p[0] = scale * (s1 + 2 * s2);
    p[1] = scale * (c1 - 2 * c2);
    p[2] = scale * (-s3);
    d1[0] = scale * (c1 + 4 * c2);
    d1[1] = scale * (-s1 + 4 * s2);
    d1[2] = scale * (-3 * c3);
    d2[0] = scale * (-s1 - 8 * s2);
    d2[1] = scale * (-c1 + 8 * c2);
    d2[2] = scale * (9 * s3);
  };
  return ModelSpace(detail::make_numeric_curve(3, fn, ModelKind::Trefoil, {{"scale", scale}}));
}

ModelSpace ModelSpace::parametric_curve(std::size_t dim, CurveFn fn, std::string name) {
  return ModelSpace(
      detail::make_numeric_curve(dim, std::move(fn), ModelKind::ParametricCurve, {{"name", name}}));
}

ModelSpace ModelSpace::embedded_graph(PointCloud vertices,
                                      std::vector<std::pair<Index, Index>> segments) {
  return ModelSpace(detail::make_graph(std::move(vertices), std::move(segments),
                                       ModelKind::EmbeddedGraph, nullptr));
}

ModelSpace ModelSpace::theta_graph(double scale) {
  if (!(scale > 0.0)) throw PreconditionError("theta graph scale must be positive");
  const double h = scale * std::sqrt(3.0);
  PointCloud v = PointCloud::from_points({{-scale, 0.0}, {scale, 0.0}, {0.0, h}, {0.0, -h}});
  std::vector<std::pair<Index, Index>> e{{0, 2}, {2, 1}, {0, 1}, {0, 3}, {3, 1}};
  return ModelSpace(
      detail::make_graph(std::move(v), std::move(e), ModelKind::Theta, {{"scale", scale}}));
}

ModelSpace ModelSpace::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SchemaError("model record needs a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  try {
    if (kind == "circle") {
      std::size_t dim = params.value("dim", std::size_t{2});
      Point center = params.value("center", Point{});
      return circle(params.value("radius", 1.0), dim, center);
    }
    if (kind == "trefoil") return trefoil(params.value("scale", 1.0));
    if (kind == "theta") return theta_graph(params.value("scale", 1.0));
    if (kind == "graph") {
      auto verts = params.at("vertices").get<std::vector<Point>>();
      auto segs = params.at("segments").get<std::vector<std::pair<Index, Index>>>();
      return embedded_graph(PointCloud::from_points(verts), std::move(segs));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model params: ") + e.what());
  }
  throw SchemaError("unknown model kind '" + kind + "'");
}

nlohmann::json ModelSpace::to_json() const { return impl_->to_json(); }

ModelKind ModelSpace::kind() const { return impl_->kind(); }

std::string ModelSpace::kind_name() const {
  switch (kind()) {
    case ModelKind::Circle: return "circle";
    case ModelKind::Trefoil: return "trefoil";
    case ModelKind::Theta: return "theta";
    case ModelKind::EmbeddedGraph: return "graph";
    case ModelKind::ParametricCurve: return "parametric";
  }
  return "unknown";
}

std::size_t ModelSpace::ambient_dim() const { return impl_->dim(); }
double ModelSpace::length() const { return impl_->length(); }
bool ModelSpace::is_closed_curve() const { return impl_->closed_curve(); }
Point ModelSpace::point_at(double t) const { return impl_->point_at(t); }
Projection ModelSpace::project(std::span<const double> x) const { return impl_->project(x); }
double ModelSpace::geodesic(double s, double t) const { return impl_->geodesic(s, t); }
MetricMatrix ModelSpace::geodesic_metric(std::span<const double> params) const {
  return impl_->geodesic_metric(params);
}
std::vector<Point> ModelSpace::normal_basis(double t) const { return impl_->normal_basis(t); }
double ModelSpace::tube_radius() const { return impl_->tube_radius(); }
double ModelSpace::density_radius(std::span<const double> params) const {
  return impl_->density_radius(params);
}
std::vector<int> ModelSpace::betti() const { return impl_->betti(); }
double ModelSpace::delta_max() const { return impl_->delta_max(); }
ModelConstants ModelSpace::constants(double delta) const { return impl_->constants(delta); }

PointCloud ModelSpace::discretize(double spacing) const {
  if (!(spacing > 0.0)) throw PreconditionError("discretization spacing must be positive");
  const double len = length();
  auto count = static_cast<std::size_t>(std::ceil(len / spacing));
  count = std::max<std::size_t>(count, 1);
  PointCloud out(ambient_dim());
  for (std::size_t k = 0; k < count; ++k) out.push_back(point_at(len * k / count));
  if (!is_closed_curve()) {
    // Open models (graphs) are parametrized segment by segment; the end of the
    // last segment is not reached by k*h < L.
    out.push_back(point_at(std::nextafter(len, 0.0)));
  }
  return out;
}

// --------------------------------------------------------------------------
// Sampling

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

SampleScheme parse_scheme(const std::string& s) {
  if (s == "stratified") return SampleScheme::Stratified;
  if (s == "uniform-arc") return SampleScheme::UniformArc;
  if (s == "dense-enumeration") return SampleScheme::DenseEnumeration;
  throw PreconditionError("unknown sampling scheme '" + s + "'");
}

std::string scheme_name(SampleScheme s) {
  switch (s) {
    case SampleScheme::Stratified: return "stratified";
    case SampleScheme::UniformArc: return "uniform-arc";
    case SampleScheme::DenseEnumeration: return "dense-enumeration";
  }
  return "unknown";
}

namespace {

double van_der_corput(std::uint64_t k) {
  double v = 0.0, base = 0.5;
  while (k) {
    if (k & 1u) v += base;
    base *= 0.5;
    k >>= 1;
  }
  return v;
}

}  // namespace

Sample sample_with_footpoints(const SamplerSpec& spec) {
  if (spec.count < 1) throw PreconditionError("sample count must be at least 1");
  if (!(spec.tau >= 0.0)) throw PreconditionError("noise radius must be nonnegative");
  const double tube = spec.model.tube_radius();
  if (spec.tau >= tube)
    throw PreconditionError("noise radius " + std::to_string(spec.tau) +
                            " does not fit inside the model's tube of radius " +
                            std::to_string(tube) + "; projections would not be unique");

  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng]() { return unit_uniform(rng()); };
  auto gaussian = [&]() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };

  const double len = spec.model.length();
  const std::size_t n = spec.count;
  Sample out;
  out.points = PointCloud(spec.model.ambient_dim());
  out.params.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double t = 0.0;
    switch (spec.scheme) {
      case SampleScheme::Stratified: t = len * static_cast<double>(k) / static_cast<double>(n); break;
      case SampleScheme::UniformArc: t = len * uniform(); break;
      case SampleScheme::DenseEnumeration: t = len * van_der_corput(k); break;
    }
    Point p = spec.model.point_at(t);
    if (spec.tau > 0.0) {
      auto normals = spec.model.normal_basis(t);
      const std::size_t m = normals.size();
      std::vector<double> offset(m);
      if (m == 1) {
        offset[0] = spec.tau * (2.0 * uniform() - 1.0);
      } else {
        double norm = 0.0;
        for (auto& c : offset) {
          c = gaussian();
          norm += c * c;
        }
        norm = std::sqrt(norm);
        double radius = spec.tau * std::pow(uniform(), 1.0 / static_cast<double>(m));
        for (auto& c : offset) c = norm > 0 ? c / norm * radius : 0.0;
      }
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += offset[a] * normals[a][i];
    }
    out.points.push_back(p);
    out.params.push_back(t);
  }
  return out;
}

PointCloud sample(const SamplerSpec& spec) { return sample_with_footpoints(spec).points; }

}  // namespace rsl
