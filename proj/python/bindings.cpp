#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rsl/conditions.hpp"
#include "rsl/error.hpp"
#include "rsl/homology.hpp"
#include "rsl/limits.hpp"
#include "rsl/reconstruct.hpp"
#include "rsl/rips.hpp"
#include "rsl/shadow.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace rsl;

// Structured values cross the boundary as JSON text; the Python package
// decodes them.
namespace {

using Points = std::vector<std::vector<double>>;

ModelSpace model_of(const std::string& text) { return ModelSpace::from_json(json::parse(text)); }

PointCloud cloud_of(const Points& pts) {
  if (pts.empty()) return PointCloud(2);
  return PointCloud::from_points(pts);
}

Points points_of(const PointCloud& c) {
  Points out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c.point(i));
  return out;
}

ExperimentCommon common_of(int dim, std::uint64_t seed, const std::optional<std::string>& metric, double eps,
                           const std::set<std::string>& faults) {
  ExperimentCommon c;
  c.dim = dim;
  c.cap = std::max(2, dim + 1);
  c.seed = seed;
  if (metric) c.metric = MetricChoice{parse_metric(*metric), eps};
  c.faults = faults;
  return c;
}

}  // namespace

PYBIND11_MODULE(_rsl, m) {
  m.doc() = "Rips complexes, shadows, nerves and Z/2 homology towers";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  m.def("known_hypotheses", &known_hypotheses);

  m.def(
      "sample",
      [](const std::string& model, std::size_t n, double tau, std::uint64_t seed, const std::string& scheme) {
        return points_of(sample({model_of(model), n, tau, seed, parse_scheme(scheme)}));
      },
      py::arg("model"), py::arg("n"), py::arg("tau") = 0.0, py::arg("seed") = 0, py::arg("scheme") = "stratified");

  m.def(
      "rips",
      [](const Points& pts, double beta, int cap) {
        return build_rips(euclidean_metric(cloud_of(pts)), beta, cap).to_json().dump();
      },
      py::arg("points"), py::arg("beta"), py::arg("cap") = kDefaultCap);

  m.def(
      "rips_betti",
      [](const Points& pts, double beta, int dim) {
        return betti(build_rips(euclidean_metric(cloud_of(pts)), beta, dim + 1), dim);
      },
      py::arg("points"), py::arg("beta"), py::arg("dim") = 1);

  m.def(
      "nerve_betti",
      [](const Points& pts, double beta, int dim) {
        PointCloud c = cloud_of(pts);
        NerveComplex nerve = build_nerve(ConvexCellSystem(c, maximal_cliques(euclidean_metric(c), beta)), dim + 1);
        return betti(nerve.complex, dim);
      },
      py::arg("points"), py::arg("beta"), py::arg("dim") = 1);

  m.def(
      "raster_betti",
      [](const Points& pts, double beta, int resolution) {
        PointCloud c = cloud_of(pts);
        RasterBetti r = raster_betti_2d(ConvexCellSystem(c, maximal_cliques(euclidean_metric(c), beta)), resolution);
        return std::vector<int>{r.b0, r.b1};
      },
      py::arg("points"), py::arg("beta"), py::arg("resolution") = 64);

  m.def(
      "check_conditions",
      [](const std::string& model, double beta, double tau, std::optional<double> zeta) {
        return check_scale_conditions(model_of(model), beta, tau, zeta).to_json().dump();
      },
      py::arg("model"), py::arg("beta"), py::arg("tau") = 0.0, py::arg("zeta") = py::none());

  m.def(
      "inverse_system",
      [](const std::string& model, std::vector<double> betas, std::vector<double> taus, double tau,
         std::optional<std::size_t> n, const std::string& object, int dim, std::uint64_t seed,
         const std::optional<std::string>& metric, double eps, const std::set<std::string>& faults) {
        InverseSystemSpec spec{model_of(model), std::move(betas), std::move(taus), tau, n, parse_object(object),
                               SampleScheme::Stratified, common_of(dim, seed, metric, eps, faults)};
        py::gil_scoped_release unlocked;
        return run_inverse_system(spec).to_json().dump();
      },
      py::arg("model"), py::arg("betas"), py::arg("taus") = std::vector<double>{}, py::arg("tau") = 0.0,
      py::arg("n") = py::none(), py::arg("object") = "shadow-nerve", py::arg("dim") = 1, py::arg("seed") = 0,
      py::arg("metric") = py::none(), py::arg("eps") = 0.0, py::arg("faults") = std::set<std::string>{});

  m.def(
      "direct_system",
      [](const std::string& model, double beta, std::vector<std::size_t> sizes, double tau, const std::string& object,
         int dim, std::uint64_t seed, const std::optional<std::string>& metric, double eps,
         const std::set<std::string>& faults) {
        DirectSystemSpec spec{model_of(model), beta, std::move(sizes), tau, parse_object(object),
                              SampleScheme::DenseEnumeration, common_of(dim, seed, metric, eps, faults)};
        py::gil_scoped_release unlocked;
        return run_direct_system(spec).to_json().dump();
      },
      py::arg("model"), py::arg("beta"), py::arg("sizes"), py::arg("tau") = 0.0, py::arg("object") = "rips",
      py::arg("dim") = 1, py::arg("seed") = 0, py::arg("metric") = py::none(), py::arg("eps") = 0.0,
      py::arg("faults") = std::set<std::string>{});

  m.def(
      "projection_check",
      [](const std::string& model, double beta, std::size_t n, int dim, std::uint64_t seed,
         const std::set<std::string>& faults) {
        ProjectionCheckSpec spec{model_of(model), beta, n, common_of(dim, seed, std::nullopt, 0.0, faults)};
        py::gil_scoped_release unlocked;
        return run_projection_check(spec).to_json().dump();
      },
      py::arg("model"), py::arg("beta"), py::arg("n"), py::arg("dim") = 1, py::arg("seed") = 0,
      py::arg("faults") = std::set<std::string>{});

  m.def(
      "reconstruct",
      [](const std::string& model, const Points& pts, double beta, double tau, double zeta,
         const std::set<std::string>& faults) {
        ModelSpace ms = model_of(model);
        PointCloud c = cloud_of(pts);
        py::gil_scoped_release unlocked;
        return build_curve_K(ms, c, beta, tau, zeta, faults).to_json().dump();
      },
      py::arg("model"), py::arg("points"), py::arg("beta"), py::arg("tau"), py::arg("zeta"),
      py::arg("faults") = std::set<std::string>{});
}
