#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rsl/conditions.hpp"
#include "rsl/limits.hpp"
#include "support.hpp"

using namespace rsl;

namespace {

int plateau_rank(const LimitReport& r, int dim, std::size_t tower = 0) {
  const auto& p = r.towers.at(tower).plateau.at(dim);
  REQUIRE(p);
  return p->rank;
}

const auto circle = ModelSpace::circle(1.0);

}  // namespace

TEST_CASE("direct system on the circle stabilizes at rank one") {
  LimitReport r = run_direct_system({.model = circle, .beta = 0.4, .sizes = {20, 40, 80, 160}});
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(plateau_rank(r, 0) == 1);
  CHECK(plateau_rank(r, 1) == 1);
  CHECK(r.towers[0].plateau[1]->length >= 3);
}

TEST_CASE("constant sample sizes give an identity tower") {
  LimitReport r = run_direct_system({.model = circle, .beta = 0.4, .sizes = {60, 60, 60}});
  const auto& p = r.towers[0].plateau[1];
  REQUIRE(p);
  CHECK(p->i0 == 0);
  CHECK(p->j0 == 0);
  for (const auto& row : r.towers[0].rank_table[1])
    for (int v : row) CHECK((v == -1 || v == 1));
}

TEST_CASE("a sparse start delays stabilization and is noted") {
  LimitReport r = run_direct_system({.model = circle, .beta = 0.05, .sizes = {20, 40, 80, 160, 320}});
  const auto& betti = r.towers.at(0).stage_betti;
  CHECK(betti.front()[1] == 0);
  CHECK(betti.back()[1] == 1);
  const auto& p = r.towers[0].plateau[1];
  if (p) CHECK(p->j0 > 0);
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("inverse system on the circle") {
  LimitReport r = run_inverse_system({.model = circle, .betas = {0.5, 0.4, 0.3, 0.2}});
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(plateau_rank(r, 1) == 1);
  CHECK(plateau_rank(r, 0) == 1);
}

TEST_CASE("inverse system on the theta graph with the epsilon-path metric") {
  ExperimentCommon common;
  common.metric = MetricChoice{MetricKind::EpsilonPath, 0.3};
  LimitReport r = run_inverse_system(
      {.model = ModelSpace::theta_graph(), .betas = {0.45, 0.4, 0.35, 0.3}, .common = common});
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(plateau_rank(r, 1) == 2);
}

TEST_CASE("noisy inverse system on the circle") {
  LimitReport r = run_inverse_system(
      {.model = circle, .betas = {0.5, 0.4, 0.3, 0.2}, .taus = {0.05, 0.04, 0.03, 0.02}});
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(plateau_rank(r, 1) == 1);
}

TEST_CASE("euclidean and epsilon-path towers coincide below epsilon") {
  LimitReport r = run_metric_comparability(
      {.model = circle, .betas = {0.12, 0.1, 0.08}, .tau = 0.02, .eps = 0.15});
  REQUIRE(r.towers.size() == 2);
  for (bool same : r.details["stagewise_identical"]) CHECK(same);
  CHECK(plateau_rank(r, 1, 0) == plateau_rank(r, 1, 1));
  CHECK(r.verdict == Verdict::Consistent);
}

TEST_CASE("projection check examples") {
  LimitReport r = run_projection_check({.model = circle, .beta = 0.4, .n = 60});
  CHECK(r.verdict == Verdict::Consistent);
  CHECK(r.details["projection_rank"] == nlohmann::json({1, 1}));
  CHECK(r.details["rips_betti"] == nlohmann::json({1, 1}));
  CHECK(r.details["nerve_betti"] == nlohmann::json({1, 1}));

  LimitReport cone = run_projection_check({.model = circle, .beta = 2.5, .n = 12});
  CHECK(cone.details["rips_betti"][1] == 0);
  CHECK(cone.details["projection_rank"][1] == 0);
  CHECK(cone.details["iso"] == true);

  ExperimentCommon zero_dim;
  zero_dim.dim = 0;
  LimitReport pair = run_projection_check({.model = circle, .beta = 0.4, .n = 2, .common = zero_dim});
  CHECK(pair.details["projection_rank"][0] == pair.details["rips_betti"][0]);
}

TEST_CASE("vertex-level f-map examples") {
  PointCloud ref = sample({circle, 240, 0.0, 0, SampleScheme::Stratified});
  FMapResult self = vertex_level_f_map(ref, 0.1, ref, 0.1);
  REQUIRE(self.map);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(self.assignment[i] == static_cast<Index>(i));

  LimitReport r = run_f_map_check({.model = circle, .n_ref = 240, .gamma = 0.1, .n = 60, .beta = 0.4});
  CHECK(r.verdict == Verdict::Consistent);

  PointCloud rotated(2);
  const double half = std::numbers::pi / 240;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double a = std::atan2(ref[i][1], ref[i][0]) + half * 0.5;
    rotated.push_back(Point{std::cos(a), std::sin(a)});
  }
  FMapResult rot = vertex_level_f_map(ref, 0.1, rotated, 0.2);
  REQUIRE(rot.map);
  CHECK(rot.max_displacement < 2 * half);
}

TEST_CASE("a failed hypothesis never yields a consistent verdict") {
  for (const auto& name : known_hypotheses()) {
    ExperimentCommon common;
    common.faults = {name};
    LimitReport inv = run_inverse_system({.model = circle, .betas = {0.5, 0.4, 0.3, 0.2}, .common = common});
    CHECK(inv.verdict == Verdict::OutOfRegime);
    LimitReport dir = run_direct_system({.model = circle, .beta = 0.4, .sizes = {20, 40, 80}, .common = common});
    CHECK(dir.verdict == Verdict::OutOfRegime);
    LimitReport proj = run_projection_check({.model = circle, .beta = 0.4, .n = 60, .common = common});
    CHECK(proj.verdict == Verdict::OutOfRegime);
  }
}

TEST_CASE("reports embed the condition checker output") {
  LimitReport r = run_inverse_system({.model = circle, .betas = {0.5, 0.3}});
  REQUIRE(r.conditions.size() == 2);
  ConditionReport direct = check_scale_conditions(circle, 0.3, 0.0);
  for (const auto& h : direct.hypotheses) {
    const Hypothesis* in_report = r.conditions[1].find(h.name);
    REQUIRE(in_report);
    CHECK(in_report->holds == h.holds);
    CHECK(in_report->lhs == h.lhs);
  }
}

TEST_CASE("direct towers are monotone along rows") {
  LimitReport r = run_direct_system({.model = circle, .beta = 0.3, .sizes = {10, 20, 40, 80, 160}});
  for (const auto& table : r.towers[0].rank_table)
    for (std::size_t i = 0; i < table.size(); ++i)
      for (std::size_t j = i + 1; j + 1 < table.size(); ++j) CHECK(table[i][j + 1] <= table[i][j]);
}

TEST_CASE("in-regime circle towers stabilize at the circle's betti numbers") {
  for (auto betas : std::vector<std::vector<double>>{{0.5, 0.45, 0.4}, {0.3, 0.25, 0.2, 0.15}, {0.6, 0.5, 0.4, 0.3}})
    for (auto object : {ObjectKind::Rips, ObjectKind::ShadowNerve}) {
      LimitReport r = run_inverse_system({.model = circle, .betas = betas, .object = object});
      if (r.verdict == Verdict::OutOfRegime) continue;
      CHECK(plateau_rank(r, 0) == 1);
      CHECK(plateau_rank(r, 1) == 1);
    }
}

TEST_CASE("increasing scale grids are rejected") {
  CHECK_THROWS(run_inverse_system({.model = circle, .betas = {0.2, 0.5}}));
}
