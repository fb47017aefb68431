#include <catch_amalgamated.hpp>

#include <cmath>

#include "rsl/error.hpp"
#include "rsl/reconstruct.hpp"
#include "support.hpp"

using namespace rsl;

namespace {

const auto circle = ModelSpace::circle(1.0);

Polyline closed(std::vector<Point> pts) { return Polyline{PointCloud::from_points(pts), true}; }

}  // namespace

TEST_CASE("noiseless circle samples are ordered by angle") {
  PointCloud s = sample({circle, 30, 0.0, 0, SampleScheme::UniformArc});
  OrderedSample o = order_by_projection(circle, s);
  REQUIRE(o.representatives.size() == 30);
  auto angle = [&](Index i) {
    double a = std::atan2(s[i][1], s[i][0]);
    return a < 0 ? a + 2 * std::numbers::pi : a;
  };
  for (std::size_t k = 1; k < 30; ++k) CHECK(angle(o.representatives[k - 1]) < angle(o.representatives[k]));
}

TEST_CASE("samples with the same projection collapse to one representative") {
  PointCloud s = PointCloud::from_points({{1.01, 0}, {0, 1}, {0.995, 0}, {-1, 0}});
  OrderedSample o = order_by_projection(circle, s);
  CHECK(o.representatives == std::vector<Index>{2, 1, 3});
  CHECK(o.groups[0] == std::vector<Index>{0, 2});
}

TEST_CASE("noisy projections are strictly increasing") {
  PointCloud s = sample({circle, 126, 0.02, 7, SampleScheme::Stratified});
  OrderedSample o = order_by_projection(circle, s);
  for (std::size_t k = 1; k < o.params.size(); ++k) CHECK(o.params[k - 1] < o.params[k]);
}

TEST_CASE("ambiguous projections name the sample") {
  PointCloud s = PointCloud::from_points({{1, 0}, {0, 0}});
  CHECK_THROWS_WITH(order_by_projection(circle, s), Catch::Matchers::ContainsSubstring("sample 1"));
}

TEST_CASE("noisy circle reconstruction") {
  PointCloud s = sample({circle, 126, 0.02, 7, SampleScheme::Stratified});
  ReconstructionResult r = build_curve_K(circle, s, 0.2, 0.02, 0.05);
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(r.checks.simple);
  CHECK(r.checks.closed);
  CHECK(r.checks.max_edge < 0.2);
  CHECK(r.checks.in_shadow);
  CHECK(r.checks.hausdorff_to_model <= 0.07);
  CHECK(r.checks.visits_each_once);
}

TEST_CASE("noiseless reconstruction passes through every sample in order") {
  PointCloud s = sample({circle, 80, 0.0, 3, SampleScheme::Stratified});
  ReconstructionResult r = build_curve_K(circle, s, 0.4, 0.0, 0.15);
  REQUIRE(r.verdict == Verdict::Consistent);
  CHECK(r.curve.points.size() == 80);
  for (std::size_t k = 0; k < 80; ++k) {
    const Index i = r.order.representatives[k];
    CHECK(std::equal(r.curve.points[k].begin(), r.curve.points[k].end(), s[i].begin()));
  }
}

TEST_CASE("trefoil reconstruction") {
  auto tr = ModelSpace::trefoil(1.0);
  PointCloud s = sample({tr, 200, 0.01, 7, SampleScheme::Stratified});
  ReconstructionResult r = build_curve_K(tr, s, 0.3, 0.01, 0.1);
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(r.checks.simple);
  CHECK(r.checks.closed);
  CHECK(r.checks.edges_under_beta);
}

TEST_CASE("reconstruction properties over seeds") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    PointCloud s = sample({circle, 126, 0.02, seed, SampleScheme::Stratified});
    ReconstructionResult r = build_curve_K(circle, s, 0.2, 0.02, 0.05);
    REQUIRE(r.verdict == Verdict::Consistent);
    CHECK(r.checks.visits_each_once);
    CHECK(r.checks.max_edge < 0.2);
    CHECK(r.checks.max_edge <= 2 * 0.02 + 2 * 0.05);
    CHECK(r.checks.in_shadow);
    CHECK(r.checks.hausdorff_to_model <= 0.02 + 0.05 + 0.2 * 0.2 / 8);
  }
}

TEST_CASE("a failed hypothesis stops reconstruction") {
  PointCloud s = sample({circle, 126, 0.02, 7, SampleScheme::Stratified});
  ReconstructionResult r = build_curve_K(circle, s, 0.2, 0.02, 0.05, {"noisy_curve_budget"});
  CHECK(r.verdict == Verdict::OutOfRegime);
  CHECK(r.to_json()["curve"].is_null());
  ReconstructionResult sparse = build_curve_K(circle, s, 0.2, 0.02, 0.01);
  CHECK(sparse.verdict == Verdict::OutOfRegime);
}

TEST_CASE("polyline simplicity") {
  CHECK(polyline_is_simple(closed({{0, 0}, {1, 0}, {1, 1}, {0, 1}})));
  CHECK_FALSE(polyline_is_simple(closed({{0, 0}, {1, 1}, {1, 0}, {0, 1}})));
  // Vertex touching a non-adjacent edge.
  CHECK_FALSE(polyline_is_simple(closed({{0, 0}, {2, 0}, {2, 2}, {1, 0}, {0, 2}})));
  // Spike folding back along its own edge.
  CHECK_FALSE(polyline_is_simple(closed({{0, 0}, {2, 0}, {1, 0}, {1, 1}})));
  // Repeated vertex.
  CHECK_FALSE(polyline_is_simple(closed({{0, 0}, {1, 0}, {1, 0}, {0, 1}})));
  // Skew in 3-D versus a true crossing in 3-D.
  CHECK(polyline_is_simple(closed({{0, 0, 0}, {2, 0, 0}, {1, -1, 1}, {1, 1, 1}})));
  CHECK_FALSE(polyline_is_simple(closed({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {1, -1, 0}, {1, 1, 0}, {0, 2, 0}})));
  // Four dimensions use the exact feasibility test.
  CHECK(polyline_is_simple(closed({{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 1}, {0, 1, 1, 0}})));
  CHECK_FALSE(polyline_is_simple(closed({{0, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}})));
}

TEST_CASE("intermediate arc check") {
  Point a{1, 0}, b{std::cos(0.1), std::sin(0.1)};
  LemmaResult chord = check_intermediate_lemma(circle, PointCloud::from_points({a, b}), 0.2);
  CHECK(chord.holds);
  CHECK(chord.samples == 10000);
  CHECK(check_intermediate_lemma(circle, PointCloud::from_points({a}), 0.2).holds);
  CHECK_THROWS_AS(check_intermediate_lemma(circle, PointCloud::from_points({a, b}), 1.0), PreconditionError);
}
