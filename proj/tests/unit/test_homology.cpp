#include <catch_amalgamated.hpp>

#include "rsl/homology.hpp"
#include "rsl/oracle.hpp"
#include "rsl/rips.hpp"
#include "rsl/shadow.hpp"
#include "support.hpp"

using namespace rsl;

namespace {

std::shared_ptr<const SimplicialComplex> share(SimplicialComplex k) {
  return std::make_shared<const SimplicialComplex>(std::move(k));
}

SimplicialComplex four_cycle() { return SimplicialComplex::from_simplices(4, 2, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

std::vector<Index> identity_map(std::size_t n) {
  std::vector<Index> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Index>(i);
  return v;
}

}  // namespace

TEST_CASE("betti number examples") {
  CHECK(betti(four_cycle(), 1) == std::vector<int>{1, 1});
  CHECK(betti(SimplicialComplex(1, 2), 1) == std::vector<int>{1, 0});
  CHECK(betti(SimplicialComplex::from_simplices(3, 2, {{0, 1, 2}}), 1) == std::vector<int>{1, 0});
  auto octahedron = SimplicialComplex::from_simplices(
      6, 3, {{0, 2, 4}, {0, 2, 5}, {0, 3, 4}, {0, 3, 5}, {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 5}});
  CHECK(betti(octahedron, 2) == std::vector<int>{1, 0, 1});
}

TEST_CASE("homology dimension must be below the cap") {
  CHECK_THROWS(Homology(share(four_cycle()), 2));
}

TEST_CASE("induced map examples") {
  auto k = share(four_cycle());
  auto id = induced_map(SimplicialMap(k, k, identity_map(4)), 1);
  CHECK(id[0] == MatrixZ2::identity(1));
  CHECK(id[1] == MatrixZ2::identity(1));

  auto cone = share(SimplicialComplex::from_simplices(5, 2, {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3, 4}}));
  auto into_cone = induced_map(SimplicialMap(k, cone, identity_map(4)), 1);
  CHECK(into_cone[1].is_zero());

  MetricMatrix m = euclidean_metric(test::unit_square());
  auto sq = share(build_rips(m, 1.1));
  auto filled = share(build_rips(m, 1.5));
  CHECK(induced_map(inclusion_map(sq, 1.1, filled, 1.5), 1)[1].rank() == 0);
}

TEST_CASE("barycentric subdivision examples") {
  Subdivision edge = barycentric_subdivision(SimplicialComplex::from_simplices(2, 2, {{0, 1}}));
  CHECK(edge.complex->count(0) == 3);
  CHECK(edge.complex->count(1) == 2);
  CHECK(edge.carrier[2] == Simplex{0, 1});

  Subdivision tri = barycentric_subdivision(SimplicialComplex::from_simplices(3, 2, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(tri.complex->count(0) == 6);
  CHECK(tri.complex->count(1) == 6);
  CHECK(betti(*tri.complex, 1) == std::vector<int>{1, 1});
}

TEST_CASE("carrier map examples") {
  PointCloud tri = PointCloud::from_points({{0, 0}, {0.1, 0}, {0, 0.1}});
  MetricMatrix mt = euclidean_metric(tri);
  SimplicialComplex k = build_rips(mt, 1.0);
  CliqueList one = maximal_cliques(mt, 1.0);
  Subdivision sd = barycentric_subdivision(k);
  auto nerve1 = share(build_nerve(ConvexCellSystem(tri, one)).complex);
  SimplicialMap c = carrier_map_to_nerve(sd, one, nerve1);
  for (Index v : c.vertex_map()) CHECK(v == 0);

  MetricMatrix ms = euclidean_metric(test::unit_square());
  SimplicialComplex sq = build_rips(ms, 1.1);
  CliqueList cl = maximal_cliques(ms, 1.1);
  Subdivision sqd = barycentric_subdivision(sq);
  auto nerve = share(build_nerve(ConvexCellSystem(test::unit_square(), cl)).complex);
  auto h = induced_map(carrier_map_to_nerve(sqd, cl, nerve), 1);
  CHECK(h[1].rank() == 1);
}

TEST_CASE("boundary of a boundary vanishes") {
  std::mt19937_64 g(31);
  for (int t = 0; t < 10; ++t) {
    SimplicialComplex k = build_rips(euclidean_metric(test::random_cloud(g, 15)), test::uniform(g, 0.3, 0.7), 3);
    for (int d = 2; d <= 3; ++d)
      for (std::size_t i = 0; i < k.count(d); ++i) {
        Chain acc;
        for (auto f : boundary(k, d, i)) acc = add_chains(acc, boundary(k, d - 1, f));
        CHECK(acc.empty());
      }
  }
}

TEST_CASE("euler characteristic from betti numbers matches face counts") {
  std::mt19937_64 g(32);
  for (int t = 0; t < 20; ++t) {
    SimplicialComplex full = build_rips(euclidean_metric(test::random_cloud(g, 14)), test::uniform(g, 0.2, 0.6), 2);
    // Cap 3 leaves room to compute H_2 of a complex with no 3-simplices.
    std::vector<Simplex> all;
    for (int d = 0; d <= 2; ++d)
      for (const auto& s : full.simplices(d)) all.push_back(s);
    SimplicialComplex k = SimplicialComplex::from_simplices(full.vertex_count(), 3, all);
    std::vector<int> b = betti(k, 2);
    const long faces = static_cast<long>(k.count(0)) - static_cast<long>(k.count(1)) + static_cast<long>(k.count(2));
    CHECK(b[0] - b[1] + b[2] == faces);
    for (int d = 0; d <= 2; ++d) CHECK(b[d] == brute_homology(k, d));
  }
}

TEST_CASE("subdivision preserves betti numbers") {
  std::mt19937_64 g(33);
  for (int t = 0; t < 20; ++t) {
    SimplicialComplex k = build_rips(euclidean_metric(test::random_cloud(g, 8 + g() % 10)), test::uniform(g, 0.2, 0.6));
    Subdivision sd = barycentric_subdivision(k);
    CHECK(betti(*sd.complex, 1) == betti(k, 1));
    // The flag chain map induces an isomorphism.
    Homology hk(share(k), 1), hs(sd.complex, 1);
    auto mats = induced_chain_map(hk, hs, subdivision_chain_map(k, sd), 1);
    for (int d = 0; d <= 1; ++d) CHECK(static_cast<int>(mats[d].rank()) == hk.rank(d));
  }
}

TEST_CASE("induced maps are functorial") {
  std::mt19937_64 g(34);
  for (int t = 0; t < 15; ++t) {
    PointCloud c = test::random_cloud(g, 24);
    MetricMatrix m = euclidean_metric(c);
    const double a = test::uniform(g, 0.2, 0.35), b = a + test::uniform(g, 0.0, 0.1), cc = b + test::uniform(g, 0.0, 0.2);
    auto k1 = share(build_rips(m.prefix(12), a));
    auto k2 = share(build_rips(m.prefix(18), b));
    auto k3 = share(build_rips(m, cc));
    SimplicialMap f = inclusion_map(k1, a, k2, b), h = inclusion_map(k2, b, k3, cc);
    auto mf = induced_map(f, 1), mh = induced_map(h, 1), mhf = induced_map(f.then(h), 1);
    for (int d = 0; d <= 1; ++d) CHECK(mhf[d] == mh[d] * mf[d]);
  }
}

TEST_CASE("tower rank examples") {
  auto id1 = MatrixZ2::identity(1);
  TowerReport ident =
      tower_ranks_from_matrices(TowerDirection::Direct, {{1}, {1}, {1}, {1}}, {{id1, id1, id1}});
  REQUIRE(ident.plateau[0]);
  CHECK(ident.plateau[0]->rank == 1);
  CHECK(ident.plateau[0]->i0 == 0);

  auto onto = MatrixZ2::from_rows({{1, 1}});
  TowerReport surj = tower_ranks_from_matrices(TowerDirection::Direct, {{2}, {1}, {1}, {1}}, {{onto, id1, id1}});
  REQUIRE(surj.plateau[0]);
  CHECK(surj.plateau[0]->rank == 1);
  CHECK(surj.rank_table[0][0][3] == 1);

  auto zero = MatrixZ2(1, 1);
  TowerReport dead = tower_ranks_from_matrices(TowerDirection::Inverse, {{1}, {1}, {1}, {1}}, {{zero, zero, zero}});
  REQUIRE(dead.plateau[0]);
  CHECK(dead.plateau[0]->rank == 0);

  TowerReport split =
      tower_ranks_from_matrices(TowerDirection::Direct, {{1}, {1}, {1}, {1}, {1}}, {{id1, zero, id1, id1}});
  CHECK(split.rank_table[0][0][4] == 0);
  CHECK(split.rank_table[0][2][4] == 1);
}

TEST_CASE("composite ranks never exceed their factors") {
  std::mt19937_64 g(35);
  for (int t = 0; t < 10; ++t) {
    PointCloud c = test::random_cloud(g, 30);
    MetricMatrix m = euclidean_metric(c);
    HomologyTower tower;
    tower.direction = TowerDirection::Direct;
    std::vector<double> scales{0.15, 0.2, 0.25, 0.3, 0.4};
    for (double s : scales) tower.stages.push_back(share(build_rips(m, s)));
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
      tower.maps.push_back(inclusion_map(tower.stages[i], scales[i], tower.stages[i + 1], scales[i + 1]));
    TowerReport r = tower_ranks(tower);
    for (const auto& table : r.rank_table)
      for (std::size_t i = 0; i < scales.size(); ++i)
        for (std::size_t j = i; j < scales.size(); ++j)
          for (std::size_t k = j; k < scales.size(); ++k) CHECK(table[i][k] <= std::min(table[i][j], table[j][k]));
  }
}
