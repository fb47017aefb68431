#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rsl/conditions.hpp"
#include "rsl/error.hpp"
#include "rsl/metric.hpp"
#include "rsl/models.hpp"
#include "support.hpp"

using namespace rsl;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

TEST_CASE("stratified circle sample of four points sits at the quarter turns") {
  PointCloud s = sample({ModelSpace::circle(1.0), 4, 0.0, 0, SampleScheme::Stratified});
  const double expect[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  REQUIRE(s.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK_THAT(s[i][0], WithinAbs(expect[i][0], 1e-12));
    CHECK_THAT(s[i][1], WithinAbs(expect[i][1], 1e-12));
  }
}

TEST_CASE("stratified circle sample has equal geodesic gaps") {
  auto c = ModelSpace::circle(1.0);
  Sample s = sample_with_footpoints({c, 60, 0.0, 0, SampleScheme::Stratified});
  for (std::size_t i = 0; i < 60; ++i)
    CHECK_THAT(c.geodesic(s.params[i], s.params[(i + 1) % 60]), WithinAbs(2 * pi / 60, 1e-12));
}

TEST_CASE("noisy circle sample stays in the tau tube") {
  PointCloud s = sample({ModelSpace::circle(1.0), 126, 0.02, 7, SampleScheme::Stratified});
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = std::hypot(s[i][0], s[i][1]);
    CHECK(r >= 0.98);
    CHECK(r <= 1.02);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  SamplerSpec spec{ModelSpace::trefoil(1.0), 50, 0.01, 11, SampleScheme::UniformArc};
  CHECK(sample(spec) == sample(spec));
  SamplerSpec other = spec;
  other.seed = 12;
  CHECK_FALSE(sample(spec) == sample(other));
}

TEST_CASE("euclidean metric examples") {
  CHECK(euclidean_metric(PointCloud::from_points({{0, 0}, {3, 4}}))(0, 1) == 5.0);
  MetricMatrix one = euclidean_metric(PointCloud::from_points({{2, 7}}));
  CHECK(one.size() == 1);
  CHECK(one(0, 0) == 0.0);
  MetricMatrix sq = euclidean_metric(test::unit_square());
  std::vector<double> d;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) d.push_back(sq(i, j));
  std::sort(d.begin(), d.end());
  CHECK(d[0] == 1.0);
  CHECK(d[3] == 1.0);
  CHECK(d[4] == std::sqrt(2.0));
  CHECK(d[5] == std::sqrt(2.0));
}

TEST_CASE("epsilon-path metric examples") {
  MetricMatrix line = epsilon_path_metric(PointCloud::from_points({{0}, {1}, {2}}), 1.5);
  CHECK(line(0, 2) == 2.0);
  MetricMatrix far = epsilon_path_metric(PointCloud::from_points({{0, 0}, {3, 4}}), 1.0);
  CHECK(std::isinf(far(0, 1)));
}

TEST_CASE("asymmetric metric is rejected") {
  CHECK_THROWS_AS(MetricMatrix::from_entries(2, {0, 1, 2, 0}), PreconditionError);
}

TEST_CASE("metric properties on random clouds") {
  std::mt19937_64 g(3);
  for (int t = 0; t < 30; ++t) {
    PointCloud c = test::random_cloud(g, 25);
    const double eps = test::uniform(g, 0.1, 0.5);
    MetricMatrix e = euclidean_metric(c), p = epsilon_path_metric(c, eps);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(e(i, i) == 0.0);
      CHECK(p(i, i) == 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        CHECK(e(i, j) == e(j, i));
        CHECK(p(i, j) == p(j, i));
        CHECK(p(i, j) >= e(i, j));
        if (e(i, j) < eps) CHECK(p(i, j) == e(i, j));
      }
    }
  }
}

TEST_CASE("hausdorff distance examples") {
  CHECK(hausdorff_distance(PointCloud::from_points({{0}}), PointCloud::from_points({{3}})) == 3.0);
  PointCloud a = test::unit_square();
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(PointCloud::from_points({{0, 0}}), PointCloud::from_points({{0, 0}, {2, 0}})) == 2.0);
}

TEST_CASE("hausdorff distance is a metric on random finite sets") {
  std::mt19937_64 g(5);
  for (int t = 0; t < 50; ++t) {
    PointCloud a = test::random_cloud(g, 1 + g() % 8), b = test::random_cloud(g, 1 + g() % 8),
               c = test::random_cloud(g, 1 + g() % 8);
    const double ab = hausdorff_distance(a, b), bc = hausdorff_distance(b, c), ac = hausdorff_distance(a, c);
    CHECK(ab > 0.0);
    CHECK(ac <= ab + bc + 1e-15);
    // Same set, different order and multiplicity.
    PointCloud a2(2);
    for (std::size_t i = a.size(); i-- > 0;) a2.push_back(a[i]);
    a2.push_back(a[0]);
    CHECK(hausdorff_distance(a, a2) == 0.0);
  }
}

TEST_CASE("circle projection") {
  auto c = ModelSpace::circle(1.0);
  Point x{2, 0};
  Projection p = c.project(x);
  CHECK_THAT(p.point[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(p.point[1], WithinAbs(0.0, 1e-15));
  Point center{0, 0};
  CHECK_THROWS_AS(c.project(center), AmbiguityError);
}

TEST_CASE("trefoil projection fixes curve points") {
  auto tr = ModelSpace::trefoil(1.0);
  for (double t : {0.0, 1.234, 7.5, 20.0}) {
    Point x = tr.point_at(t);
    Projection p = tr.project(x);
    CHECK(distance(p.point, x) < 1e-9);
  }
}

TEST_CASE("projection is idempotent") {
  std::mt19937_64 g(8);
  for (auto model : {ModelSpace::circle(1.0), ModelSpace::trefoil(1.0), ModelSpace::theta_graph()}) {
    PointCloud s = sample({model, 40, 0.5 * model.tube_radius(), 9, SampleScheme::UniformArc});
    for (std::size_t i = 0; i < s.size(); ++i) {
      Point once = model.project(s[i]).point;
      Point twice = model.project(once).point;
      CHECK(distance(once, twice) < 1e-9);
    }
  }
}

TEST_CASE("circle constants") {
  auto c = ModelSpace::circle(1.0);
  ModelConstants k = c.constants(1.0);
  CHECK_THAT(k.eta, WithinAbs(2.0, 1e-12));
  CHECK_THAT(k.xi, WithinAbs(pi / 3, 1e-12));
  CHECK(k.eps_r(0.37) == 0.37);
}

TEST_CASE("circle metric comparison inequality on random pairs") {
  auto c = ModelSpace::circle(1.0);
  std::mt19937_64 g(13);
  for (double delta : {0.3, 1.0, 1.9}) {
    const double xi = c.constants(delta).xi;
    int tested = 0;
    while (tested < 500) {
      const double s = test::uniform(g, 0, 2 * pi), t = test::uniform(g, 0, 2 * pi);
      const double e = distance(c.point_at(s), c.point_at(t));
      if (!(e < delta)) continue;
      ++tested;
      const double d = c.geodesic(s, t);
      CHECK(e <= d + 1e-12);
      CHECK(d <= xi * e + 1e-12);
    }
  }
}

TEST_CASE("theta graph has first Betti number two") {
  auto th = ModelSpace::theta_graph();
  CHECK(th.betti() == std::vector<int>{1, 2});
  CHECK(std::isnan(th.constants(0.2).eta));
}

TEST_CASE("scale condition examples") {
  auto c = ModelSpace::circle(1.0);
  ConditionReport r = check_scale_conditions(c, 0.4, 0.0);
  const Hypothesis* h = r.find("normal_slice_scale");
  REQUIRE(h);
  CHECK(h->holds);
  CHECK_THAT(h->lhs, WithinAbs(1.2, 1e-12));
  CHECK_THAT(h->rhs, WithinAbs(2.0, 1e-12));

  ConditionReport noisy = check_scale_conditions(c, 0.2, 0.02, 0.05);
  const Hypothesis* b = noisy.find("noisy_curve_budget");
  REQUIRE(b);
  CHECK(b->holds);
  CHECK_THAT(b->lhs, WithinAbs(0.07, 1e-12));
  CHECK_THAT(b->rhs, WithinAbs(0.1, 1e-12));

  ConditionReport big = check_scale_conditions(c, 1.0, 0.0);
  CHECK_FALSE(big.find("normal_slice_scale")->holds);
  CHECK_FALSE(big.all_hold());
}

TEST_CASE("fault injection forces hypotheses false") {
  auto c = ModelSpace::circle(1.0);
  ConditionReport r = check_scale_conditions(c, 0.3, 0.0);
  REQUIRE(r.all_hold());
  r.inject_faults({"hausmann_scale", "noise_in_tube"});
  CHECK_FALSE(r.find("hausmann_scale")->holds);
  CHECK(r.find("hausmann_scale")->injected);
  // Not evaluated without noise, so it is appended as failed.
  REQUIRE(r.find("noise_in_tube"));
  CHECK_FALSE(r.find("noise_in_tube")->holds);
  CHECK_THROWS_AS(r.inject_faults({"no_such_hypothesis"}), PreconditionError);
}
