// Acceptance suite: one PASS/FAIL line per criterion with its runtime.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "rsl/conditions.hpp"
#include "rsl/homology.hpp"
#include "rsl/limits.hpp"
#include "rsl/oracle.hpp"
#include "rsl/reconstruct.hpp"
#include "rsl/rips.hpp"
#include "rsl/shadow.hpp"

using namespace rsl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && s >= budget_s) {
    o.ok = false;
    o.detail = "over time budget of " + std::to_string(budget_s) + " s";
  }
  if (!o.ok) ++failures;
  std::printf("%s  %2d  %-44s %8.2f s%s%s\n", o.ok ? "PASS" : "FAIL", id, name, s, o.detail.empty() ? "" : "  ",
              o.detail.c_str());
  std::fflush(stdout);
}

PointCloud random_cloud(std::mt19937_64& g, std::size_t n, std::size_t dim = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c(dim);
  for (std::size_t i = 0; i < n; ++i) {
    Point p(dim);
    for (auto& x : p) x = u(g);
    c.push_back(p);
  }
  return c;
}

std::optional<int> plateau_rank(const LimitReport& r, int dim, std::size_t tower = 0) {
  if (tower >= r.towers.size()) return std::nullopt;
  const auto& p = r.towers[tower].plateau.at(dim);
  if (!p) return std::nullopt;
  return p->rank;
}

std::string str(std::optional<int> v) { return v ? std::to_string(*v) : "none"; }

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rsl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const auto circle = ModelSpace::circle(1.0);

const std::vector<std::string> kTowerCommand{"tower",  "--model", "circle", "--radius",       "1",   "--beta-grid",
                                             "0.5,0.4,0.3,0.2", "--object", "shadow-nerve", "--dim", "1", "--seed", "7"};

}  // namespace

int main() {
  criterion(1, "rips strictness and brute agreement", 5, [] {
    Outcome o;
    std::mt19937_64 g(1001);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + g() % 11;
      MetricMatrix m = euclidean_metric(random_cloud(g, n, 1 + g() % 3));
      const Index a = static_cast<Index>(g() % n);
      Index b = static_cast<Index>(g() % (n - 1));
      if (b >= a) ++b;
      const double beta = m(a, b);
      SimplicialComplex k = build_rips(m, beta, 3);
      o.expect(!k.contains(Simplex{std::min(a, b), std::max(a, b)}), "pair at distance beta was joined");
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
          o.expect(k.contains(Simplex{i, j}) == (m(i, j) < beta), "edge set differs from d < beta");
      o.expect(brute_rips(m, beta, 3).to_json() == k.to_json(), "brute enumeration disagrees");
    }
    return o;
  });

  criterion(2, "circle rips and nerve betti (1,1)", 60, [] {
    Outcome o;
    for (std::size_t n : {40, 80, 160})
      for (double beta : {0.3, 0.4, 0.5}) {
        PointCloud s = sample({circle, n, 0.0, 0, SampleScheme::Stratified});
        MetricMatrix m = euclidean_metric(s);
        const std::string tag = "n=" + std::to_string(n) + " beta=" + std::to_string(beta);
        o.expect(check_scale_conditions(circle, beta, 0.0).all_hold(), tag + " out of regime");
        o.expect(betti(build_rips(m, beta, 2), 1) == std::vector<int>{1, 1}, tag + " rips betti");
        NerveComplex nerve = build_nerve(ConvexCellSystem(s, maximal_cliques(m, beta)), 2);
        o.expect(betti(nerve.complex, 1) == std::vector<int>{1, 1}, tag + " nerve betti");
      }
    return o;
  });

  criterion(3, "nerve betti equals raster oracle", 120, [] {
    Outcome o;
    std::mt19937_64 g(1003);
    std::uniform_real_distribution<double> beta_of(0.15, 0.6);
    const auto theta = ModelSpace::theta_graph();
    for (int t = 0; t < 24; ++t) {
      const auto& model = t % 2 ? theta : circle;
      const std::size_t n = 20 + g() % 40;
      PointCloud s = sample({model, n, 0.03 * (t % 3), g(), SampleScheme::UniformArc});
      const double beta = beta_of(g);
      ConvexCellSystem cs(s, maximal_cliques(euclidean_metric(s), beta));
      std::vector<int> b = betti(build_nerve(cs, 2).complex, 1);
      RasterBetti r = raster_betti_2d(cs);
      o.expect(b[0] == r.b0 && b[1] == r.b1, "mismatch on configuration " + std::to_string(t));
    }
    return o;
  });

  criterion(4, "direct system plateau at rank 1", 60, [] {
    Outcome o;
    LimitReport r = run_direct_system({.model = circle, .beta = 0.4, .sizes = {20, 40, 80, 160}});
    o.expect(r.verdict == Verdict::Consistent, "verdict " + verdict_name(r.verdict));
    o.expect(plateau_rank(r, 1) == 1, "H1 plateau " + str(plateau_rank(r, 1)));
    o.expect(!r.towers.empty() && r.towers[0].plateau[1] && r.towers[0].plateau[1]->length >= 3,
             "plateau shorter than 3");
    return o;
  });

  criterion(5, "inverse system: circle 1, theta 2", 120, [] {
    Outcome o;
    LimitReport c = run_inverse_system({.model = circle, .betas = {0.5, 0.4, 0.3, 0.2}});
    o.expect(c.verdict == Verdict::Consistent, "circle verdict " + verdict_name(c.verdict));
    o.expect(plateau_rank(c, 1) == 1, "circle H1 plateau " + str(plateau_rank(c, 1)));
    LimitReport t = run_inverse_system({.model = ModelSpace::theta_graph(), .betas = {0.45, 0.4, 0.35, 0.3}});
    o.expect(t.verdict == Verdict::Consistent, "theta verdict " + verdict_name(t.verdict));
    o.expect(plateau_rank(t, 1) == 2, "theta H1 plateau " + str(plateau_rank(t, 1)));
    return o;
  });

  criterion(6, "noisy towers and metric comparability", 120, [] {
    Outcome o;
    LimitReport r =
        run_inverse_system({.model = circle, .betas = {0.5, 0.4, 0.3, 0.2}, .taus = {0.05, 0.04, 0.03, 0.02}});
    o.expect(r.verdict == Verdict::Consistent, "noisy verdict " + verdict_name(r.verdict));
    o.expect(plateau_rank(r, 1) == 1, "noisy H1 plateau " + str(plateau_rank(r, 1)));
    LimitReport cmp = run_metric_comparability({.model = circle, .betas = {0.12, 0.1, 0.08}, .tau = 0.02, .eps = 0.15});
    o.expect(cmp.verdict == Verdict::Consistent, "comparison verdict " + verdict_name(cmp.verdict));
    bool same = cmp.details.contains("stagewise_identical");
    if (same)
      for (bool s : cmp.details["stagewise_identical"]) same = same && s;
    o.expect(same, "towers differ at some stage");
    o.expect(plateau_rank(cmp, 1, 0) == plateau_rank(cmp, 1, 1), "plateau ranks differ");
    return o;
  });

  criterion(7, "projection check and subdivision invariance", 60, [] {
    Outcome o;
    LimitReport r = run_projection_check({.model = circle, .beta = 0.4, .n = 60});
    o.expect(r.verdict == Verdict::Consistent, "verdict " + verdict_name(r.verdict));
    o.expect(r.details["projection_rank"][1] == 1, "H1 map rank");
    o.expect(r.details["rips_betti"][1] == 1 && r.details["nerve_betti"][1] == 1, "source or target H1");
    o.expect(r.details["subdivision_invariant"] == true, "Betti(Sd K) differs from Betti(K)");
    return o;
  });

  criterion(8, "curve reconstruction", 60, [] {
    Outcome o;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      PointCloud s = sample({circle, 126, 0.02, seed, SampleScheme::Stratified});
      ReconstructionResult r = build_curve_K(circle, s, 0.2, 0.02, 0.05);
      const std::string tag = "seed " + std::to_string(seed);
      o.expect(r.verdict == Verdict::Consistent, tag + " verdict " + verdict_name(r.verdict));
      o.expect(r.checks.simple && r.checks.closed, tag + " not a simple closed curve");
      o.expect(r.checks.max_edge < 0.2, tag + " edge too long");
      o.expect(r.checks.in_shadow, tag + " edge outside the shadow");
      o.expect(r.checks.hausdorff_to_model <= 0.075, tag + " Hausdorff " + std::to_string(r.checks.hausdorff_to_model));
    }
    auto tr = ModelSpace::trefoil(1.0);
    PointCloud s = sample({tr, 200, 0.01, 7, SampleScheme::Stratified});
    ReconstructionResult r = build_curve_K(tr, s, 0.3, 0.01, 0.1);
    o.expect(r.checks.simple && r.checks.closed && r.checks.edges_under_beta, "trefoil checks");
    return o;
  });

  criterion(9, "single-hypothesis faults are out of regime", 30, [] {
    Outcome o;
    const auto theta = ModelSpace::theta_graph();
    for (const auto& name : known_hypotheses()) {
      ExperimentCommon common;
      common.faults = {name};
      auto flips = [&](const LimitReport& r, const char* what) {
        o.expect(r.verdict == Verdict::OutOfRegime, name + " escapes in " + what);
      };
      flips(run_inverse_system({.model = circle, .betas = {0.5, 0.4, 0.3}, .common = common}), "inverse");
      flips(run_inverse_system({.model = theta, .betas = {0.45, 0.4, 0.35}, .common = common}), "theta inverse");
      flips(run_inverse_system(
                {.model = circle, .betas = {0.5, 0.4, 0.3}, .taus = {0.04, 0.03, 0.02}, .common = common}),
            "noisy inverse");
      flips(run_direct_system({.model = circle, .beta = 0.4, .sizes = {20, 40, 80}, .common = common}), "direct");
      flips(run_metric_comparability(
                {.model = circle, .betas = {0.12, 0.1, 0.08}, .tau = 0.02, .eps = 0.15, .common = common}),
            "metric comparison");
      flips(run_projection_check({.model = circle, .beta = 0.4, .n = 60, .common = common}), "projection");
      flips(run_f_map_check({.model = circle, .n_ref = 240, .gamma = 0.1, .n = 60, .beta = 0.4, .common = common}),
            "f-map");
      PointCloud s = sample({circle, 126, 0.02, 7, SampleScheme::Stratified});
      o.expect(build_curve_K(circle, s, 0.2, 0.02, 0.05, {name}).verdict == Verdict::OutOfRegime,
               name + " escapes in reconstruction");
      std::vector<std::string> args = kTowerCommand;
      args.insert(args.end(), {"--inject-fault", name});
      o.expect(run_cli(args) == cli::kExitOutOfRegime, name + " tower command exit code");
    }
    return o;
  });

  criterion(10, "deterministic tower output", 30, [] {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "rsl_acceptance";
    fs::create_directories(dir);
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path p = dir / ("tower_" + std::to_string(k) + ".json");
      std::vector<std::string> args = kTowerCommand;
      args.insert(args.end(), {"--out", p.string()});
      o.expect(run_cli(args) == cli::kExitOk, "command did not exit 0");
      outputs[k] = slurp(p);
    }
    o.expect(!outputs[0].empty() && outputs[0] == outputs[1], "outputs differ");
    return o;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
