#include "rsl/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "rsl/error.hpp"
#include "rsl/parallel.hpp"
#include "rsl/shadow.hpp"

namespace rsl {

namespace {

const char* kNoteHomology =
    "homology shadow: ranks of induced maps on Z/2 homology stand in for isomorphisms of "
    "homotopy groups; non-abelian fundamental-group phenomena are not detected";
const char* kNoteWindow =
    "stabilization is asserted only within the computed window of stages, never for the "
    "limit itself";
const char* kNoteCofinal =
    "cofinal subsystem: one fixed sample serves every stage, so connecting maps are "
    "inclusions over a common vertex set";

nlohmann::json model_json(const ModelSpace& m) {
  try {
    return m.to_json();
  } catch (const SchemaError&) {
    return {{"kind", m.kind_name()}};
  }
}

nlohmann::json metric_json(const MetricChoice& c) {
  nlohmann::json j{{"kind", metric_name(c.kind)}};
  if (c.kind == MetricKind::EpsilonPath) j["eps"] = c.eps;
  return j;
}

nlohmann::json common_json(const ExperimentCommon& c, const MetricChoice& metric) {
  return {{"dim", c.dim},
          {"cap", c.cap},
          {"seed", c.seed},
          {"metric", metric_json(metric)},
          {"inject_fault", std::vector<std::string>(c.faults.begin(), c.faults.end())}};
}

void check_common(const ExperimentCommon& c) {
  if (c.dim < 0) throw PreconditionError("homology dimension must be nonnegative");
  if (c.cap < c.dim + 1)
    throw PreconditionError("dimension cap " + std::to_string(c.cap) + " truncates H_" +
                            std::to_string(c.dim) + "; use a cap of at least " +
                            std::to_string(c.dim + 1));
}

std::vector<double> footpoint_params(const ModelSpace& model, const Sample& s, double tau) {
  if (tau == 0.0) return s.params;
  std::vector<double> out;
  out.reserve(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) out.push_back(model.project(s.points[i]).param);
  return out;
}

Hypothesis density_hypothesis(double zeta, double beta) {
  Hypothesis h;
  h.name = "sample_density";
  h.statement = "sample is beta/2-dense: zeta < beta / 2";
  h.lhs = zeta;
  h.rhs = beta / 2.0;
  h.holds = zeta < beta / 2.0;
  return h;
}

struct Built {
  std::shared_ptr<const SimplicialComplex> complex;
  CliqueList cliques;
};

Built build_object(ObjectKind kind, const PointCloud& pts, const MetricMatrix& d, double beta,
                   const ExperimentCommon& c) {
  Built b;
  if (kind == ObjectKind::Rips) {
    b.complex = std::make_shared<SimplicialComplex>(build_rips(d, beta, c.cap));
  } else {
    b.cliques = maximal_cliques(d, beta, c.clique_budget);
    NerveComplex nerve = build_nerve(ConvexCellSystem(pts, b.cliques), c.cap);
    b.complex = std::make_shared<SimplicialComplex>(std::move(nerve.complex));
  }
  return b;
}

// Cell i of `small` goes to the lexicographically smallest cell of `big`
// containing it; hulls only grow, so intersecting cells stay intersecting.
std::vector<Index> refine_cells(const CliqueList& small, const CliqueList& big) {
  std::vector<std::vector<std::size_t>> by_vertex(big.n);
  for (std::size_t c = 0; c < big.cliques.size(); ++c)
    for (Index v : big.cliques[c]) by_vertex[static_cast<std::size_t>(v)].push_back(c);
  std::vector<Index> map(small.cliques.size());
  for (std::size_t i = 0; i < small.cliques.size(); ++i) {
    const auto& s = small.cliques[i];
    bool found = false;
    for (std::size_t c : by_vertex.at(static_cast<std::size_t>(s.front())))
      if (std::includes(big.cliques[c].begin(), big.cliques[c].end(), s.begin(), s.end())) {
        map[i] = static_cast<Index>(c);
        found = true;
        break;
      }
    if (!found) throw InternalError("a cell is not contained in any cell of the coarser cover");
  }
  return map;
}

SimplicialMap connecting_map(ObjectKind kind, const Built& from, double beta_from, const Built& to,
                             double beta_to) {
  if (kind == ObjectKind::Rips) return inclusion_map(from.complex, beta_from, to.complex, beta_to);
  if (beta_from > beta_to) throw PreconditionError("scale ordering violated");
  return SimplicialMap(from.complex, to.complex, refine_cells(from.cliques, to.cliques));
}

void apply_faults(LimitReport& rep, const std::set<std::string>& faults) {
  for (auto& c : rep.conditions) c.inject_faults(faults);
}

// Out of regime when any stage fails a hypothesis; records the reasons.
bool regime_ok(LimitReport& rep) {
  for (std::size_t i = 0; i < rep.conditions.size(); ++i)
    for (const auto& name : rep.conditions[i].failed())
      rep.reasons.push_back("hypothesis " + name + " fails at stage " + std::to_string(i));
  if (!rep.reasons.empty()) {
    rep.verdict = Verdict::OutOfRegime;
    return false;
  }
  return true;
}

// Compares every dimension's plateau with the expected ranks.
void judge_tower(LimitReport& rep, const TowerReport& t, const std::vector<int>& expected,
                 const std::string& what) {
  bool ok = true;
  for (std::size_t d = 0; d < t.dims.size(); ++d) {
    const int want = d < expected.size() ? expected[d] : 0;
    if (!t.plateau[d]) {
      ok = false;
      rep.reasons.push_back(what + ": H_" + std::to_string(d) + " not stabilized in window");
    } else if (t.plateau[d]->rank != want) {
      ok = false;
      rep.reasons.push_back(what + ": H_" + std::to_string(d) + " stabilized at rank " +
                            std::to_string(t.plateau[d]->rank) + ", expected " + std::to_string(want));
    }
  }
  if (!ok) rep.verdict = Verdict::Inconsistent;
}

std::vector<int> padded_betti(const ModelSpace& model, int dim) {
  std::vector<int> b = model.betti();
  b.resize(static_cast<std::size_t>(dim) + 1, 0);
  return b;
}

}  // namespace

ObjectKind parse_object(const std::string& s) {
  if (s == "rips") return ObjectKind::Rips;
  if (s == "shadow-nerve") return ObjectKind::ShadowNerve;
  throw PreconditionError("unknown object '" + s + "' (expected rips or shadow-nerve)");
}

std::string object_name(ObjectKind k) { return k == ObjectKind::Rips ? "rips" : "shadow-nerve"; }

MetricKind parse_metric(const std::string& s) {
  if (s == "euclidean") return MetricKind::Euclidean;
  if (s == "epsilon-path") return MetricKind::EpsilonPath;
  if (s == "geodesic") return MetricKind::Geodesic;
  throw PreconditionError("unknown metric '" + s + "' (expected euclidean, epsilon-path or geodesic)");
}

std::string metric_name(MetricKind k) {
  switch (k) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::EpsilonPath: return "epsilon-path";
    case MetricKind::Geodesic: return "geodesic";
  }
  return "unknown";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::OutOfRegime: return "out-of-regime";
  }
  return "unknown";
}

MetricChoice default_metric(double tau) {
  return tau > 0.0 ? MetricChoice{MetricKind::Euclidean, 0.0} : MetricChoice{MetricKind::Geodesic, 0.0};
}

bool LimitReport::conditions_hold() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.all_hold(); });
}

nlohmann::json LimitReport::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (std::size_t i = 0; i < stages.size(); ++i)
    st.push_back({{"index", i}, {"beta", stages[i].beta}, {"tau", stages[i].tau}, {"n", stages[i].n}});
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : conditions) conds.push_back(c.to_json());
  nlohmann::json tw = nlohmann::json::array();
  for (const auto& t : towers) {
    nlohmann::json j = t.to_json();
    for (std::size_t i = 0; i < j["stages"].size() && i < stages.size(); ++i) {
      j["stages"][i]["beta"] = stages[i].beta;
      j["stages"][i]["n"] = stages[i].n;
    }
    tw.push_back(std::move(j));
  }
  return {{"experiment", experiment},
          {"spec", spec},
          {"model_betti", model_betti},
          {"verdict", verdict_name(verdict)},
          {"reasons", reasons},
          {"stages", std::move(st)},
          {"conditions", std::move(conds)},
          {"conditions_hold", conditions_hold()},
          {"towers", std::move(tw)},
          {"details", details},
          {"notes", notes}};
}

std::size_t auto_sample_count(const ModelSpace& model, double beta_min, double tau_min) {
  const double spacing = tau_min > 0.0 ? (beta_min - 2.0 * tau_min) / 2.0 : beta_min / 2.0;
  if (!(spacing > 0.0))
    throw PreconditionError("noise " + std::to_string(tau_min) + " leaves no room for density at beta " +
                            std::to_string(beta_min));
  return std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(model.length() / spacing)));
}

MetricMatrix experiment_metric(const ModelSpace& model, const Sample& sample, const MetricChoice& choice) {
  switch (choice.kind) {
    case MetricKind::Euclidean: return euclidean_metric(sample.points);
    case MetricKind::EpsilonPath: return epsilon_path_metric(sample.points, choice.eps);
    case MetricKind::Geodesic: return model.geodesic_metric(sample.params);
  }
  throw InternalError("unknown metric kind");
}

// --------------------------------------------------------------------------

LimitReport run_direct_system(const DirectSystemSpec& spec) {
  check_common(spec.common);
  if (!(spec.beta > 0.0)) throw PreconditionError("beta must be positive");
  if (spec.sizes.size() < 2) throw PreconditionError("a direct system needs at least two sample sizes");
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    if (spec.sizes[i] < 1) throw PreconditionError("sample sizes must be positive");
    if (i && spec.sizes[i] < spec.sizes[i - 1]) throw PreconditionError("sample sizes must be nondecreasing");
  }
  const MetricChoice metric = spec.common.metric.value_or(default_metric(spec.tau));

  LimitReport rep;
  rep.experiment = "direct-system";
  rep.spec = {{"model", model_json(spec.model)},
              {"beta", spec.beta},
              {"sizes", spec.sizes},
              {"tau", spec.tau},
              {"object", object_name(spec.object)},
              {"scheme", scheme_name(spec.scheme)},
              {"common", common_json(spec.common, metric)}};
  rep.model_betti = padded_betti(spec.model, spec.common.dim);
  rep.notes = {kNoteHomology, kNoteWindow,
               "samples are nested prefixes of one enumeration; the metric is computed once on "
               "the largest sample and restricted"};

  const std::size_t n_max = spec.sizes.back();
  Sample sample = sample_with_footpoints({spec.model, n_max, spec.tau, spec.common.seed, spec.scheme});
  const std::vector<double> foot = footpoint_params(spec.model, sample, spec.tau);
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    rep.stages.push_back({spec.beta, spec.tau, spec.sizes[i]});
    ConditionReport c = check_scale_conditions(spec.model, spec.beta, spec.tau);
    double zeta = spec.model.density_radius(std::span(foot.data(), spec.sizes[i]));
    if (i + 1 == spec.sizes.size())
      c.add(density_hypothesis(zeta, spec.beta));
    else if (!(zeta < spec.beta / 2.0))
      rep.notes.push_back("stage " + std::to_string(i) + " is sparser than beta/2 (density " +
                          std::to_string(zeta) + "); early ranks may differ");
    rep.conditions.push_back(std::move(c));
  }
  apply_faults(rep, spec.common.faults);
  if (!regime_ok(rep)) return rep;

  const MetricMatrix full = experiment_metric(spec.model, sample, metric);
  const std::size_t k = spec.sizes.size();
  std::vector<Built> built(k);
  parallel_for(k, [&](std::size_t i) {
    built[i] = build_object(spec.object, sample.points.prefix(spec.sizes[i]), full.prefix(spec.sizes[i]),
                            spec.beta, spec.common);
  });
  HomologyTower tower;
  tower.direction = TowerDirection::Direct;
  tower.up_to = spec.common.dim;
  for (const auto& b : built) tower.stages.push_back(b.complex);
  for (std::size_t i = 0; i + 1 < k; ++i)
    tower.maps.push_back(connecting_map(spec.object, built[i], spec.beta, built[i + 1], spec.beta));
  rep.towers.push_back(tower_ranks(tower));

  const auto& t = rep.towers.back();
  rep.details["reference_betti"] = t.stage_betti.back();
  rep.verdict = Verdict::Consistent;
  judge_tower(rep, t, t.stage_betti.back(), "against the largest sample");
  judge_tower(rep, t, rep.model_betti, "against the model");
  return rep;
}

LimitReport run_inverse_system(const InverseSystemSpec& spec) {
  check_common(spec.common);
  const std::size_t k = spec.betas.size();
  if (k < 2) throw PreconditionError("an inverse system needs at least two scales");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(spec.betas[i] > 0.0)) throw PreconditionError("scales must be positive");
    if (i && !(spec.betas[i] < spec.betas[i - 1]))
      throw PreconditionError("scale grid must be strictly decreasing");
  }
  std::vector<double> taus = spec.taus.empty() ? std::vector<double>(k, spec.tau) : spec.taus;
  if (taus.size() != k) throw PreconditionError("noise grid must pair with the scale grid");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(taus[i] >= 0.0)) throw PreconditionError("noise must be nonnegative");
    if (i && taus[i] > taus[i - 1]) throw PreconditionError("noise grid must be nonincreasing");
  }
  const double tau_min = taus.back();
  const std::size_t n = spec.n.value_or(auto_sample_count(spec.model, spec.betas.back(), tau_min));
  const MetricChoice metric = spec.common.metric.value_or(default_metric(tau_min));

  LimitReport rep;
  rep.experiment = "inverse-system";
  rep.spec = {{"model", model_json(spec.model)},
              {"betas", spec.betas},
              {"taus", taus},
              {"n", n},
              {"object", object_name(spec.object)},
              {"scheme", scheme_name(spec.scheme)},
              {"common", common_json(spec.common, metric)}};
  rep.model_betti = padded_betti(spec.model, spec.common.dim);
  rep.notes = {kNoteHomology, kNoteWindow, kNoteCofinal};
  if (tau_min > 0.0)
    rep.notes.push_back("the common sample carries the smallest noise of the grid; each stage's "
                        "hypotheses use that stage's noise level");

  Sample sample = sample_with_footpoints({spec.model, n, tau_min, spec.common.seed, spec.scheme});
  const std::vector<double> foot = footpoint_params(spec.model, sample, tau_min);
  const double zeta = spec.model.density_radius(foot);
  rep.details["zeta"] = zeta;
  for (std::size_t i = 0; i < k; ++i) {
    rep.stages.push_back({spec.betas[i], taus[i], n});
    ConditionReport c = check_scale_conditions(spec.model, spec.betas[i], taus[i],
                                               taus[i] > 0.0 ? std::optional<double>(zeta) : std::nullopt);
    c.add(density_hypothesis(zeta, spec.betas[i]));
    rep.conditions.push_back(std::move(c));
  }
  apply_faults(rep, spec.common.faults);
  if (!regime_ok(rep)) return rep;

  const MetricMatrix d = experiment_metric(spec.model, sample, metric);
  std::vector<Built> built(k);
  parallel_for(k, [&](std::size_t i) { built[i] = build_object(spec.object, sample.points, d, spec.betas[i], spec.common); });
  HomologyTower tower;
  tower.direction = TowerDirection::Inverse;
  tower.up_to = spec.common.dim;
  for (const auto& b : built) tower.stages.push_back(b.complex);
  for (std::size_t i = 0; i + 1 < k; ++i)
    tower.maps.push_back(connecting_map(spec.object, built[i + 1], spec.betas[i + 1], built[i], spec.betas[i]));
  rep.towers.push_back(tower_ranks(tower));
  rep.verdict = Verdict::Consistent;
  judge_tower(rep, rep.towers.back(), rep.model_betti, "against the model");
  return rep;
}

LimitReport run_metric_comparability(const MetricComparisonSpec& spec) {
  check_common(spec.common);
  const std::size_t k = spec.betas.size();
  if (k < 2) throw PreconditionError("metric comparison needs at least two scales");
  if (!(spec.eps > 0.0)) throw PreconditionError("epsilon must be positive");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(spec.betas[i] > 0.0)) throw PreconditionError("scales must be positive");
    if (i && !(spec.betas[i] < spec.betas[i - 1]))
      throw PreconditionError("scale grid must be strictly decreasing");
    if (!(spec.betas[i] < spec.eps))
      throw PreconditionError("every scale must lie below epsilon for the metrics to agree");
  }
  const std::size_t n = spec.n.value_or(auto_sample_count(spec.model, spec.betas.back(), spec.tau));

  LimitReport rep;
  rep.experiment = "metric-comparability";
  rep.spec = {{"model", model_json(spec.model)},
              {"betas", spec.betas},
              {"tau", spec.tau},
              {"eps", spec.eps},
              {"n", n},
              {"kappa_max", spec.kappa_max},
              {"common", common_json(spec.common, {MetricKind::EpsilonPath, spec.eps})}};
  rep.model_betti = padded_betti(spec.model, spec.common.dim);
  rep.notes = {kNoteHomology, kNoteWindow, kNoteCofinal,
               "Euclidean distance never exceeds the eps-path distance, so the upper comparison "
               "constant is 1"};

  Sample sample = sample_with_footpoints({spec.model, n, spec.tau, spec.common.seed, SampleScheme::Stratified});
  const std::vector<double> foot = footpoint_params(spec.model, sample, spec.tau);
  const double zeta = spec.model.density_radius(foot);
  const MetricMatrix e = euclidean_metric(sample.points);
  const MetricMatrix p = epsilon_path_metric(sample.points, spec.eps);

  double kappa = 1.0;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (e(i, j) == 0.0) continue;
      double r = p(i, j) / e(i, j);
      if (r > kappa) {
        kappa = r;
        witness = {i, j};
      }
    }
  Hypothesis comp;
  comp.name = "metric_comparability";
  comp.statement = "max d_eps(p,q) / |p-q| <= kappa_max";
  comp.lhs = kappa;
  comp.rhs = spec.kappa_max;
  comp.holds = kappa <= spec.kappa_max;
  if (witness) rep.details["kappa_witness"] = {witness->first, witness->second};
  rep.details["kappa1"] = std::isinf(kappa) ? nlohmann::json("inf") : nlohmann::json(kappa);
  rep.details["zeta"] = zeta;

  for (std::size_t i = 0; i < k; ++i) {
    rep.stages.push_back({spec.betas[i], spec.tau, n});
    ConditionReport c = check_scale_conditions(spec.model, spec.betas[i], spec.tau,
                                               spec.tau > 0.0 ? std::optional<double>(zeta) : std::nullopt);
    c.add(density_hypothesis(zeta, spec.betas[i]));
    c.add(comp);
    rep.conditions.push_back(std::move(c));
  }
  apply_faults(rep, spec.common.faults);
  if (!regime_ok(rep)) return rep;

  std::vector<std::shared_ptr<const SimplicialComplex>> ke(k), kp(k);
  parallel_for(k, [&](std::size_t i) {
    ke[i] = std::make_shared<SimplicialComplex>(build_rips(e, spec.betas[i], spec.common.cap));
    kp[i] = std::make_shared<SimplicialComplex>(build_rips(p, spec.betas[i], spec.common.cap));
  });
  nlohmann::json identical = nlohmann::json::array();
  bool all_identical = true;
  for (std::size_t i = 0; i < k; ++i) {
    bool same = *ke[i] == *kp[i];
    identical.push_back(same);
    all_identical = all_identical && same;
  }
  rep.details["stagewise_identical"] = identical;

  for (const auto* stages : {&ke, &kp}) {
    HomologyTower tower;
    tower.direction = TowerDirection::Inverse;
    tower.up_to = spec.common.dim;
    tower.stages = *stages;
    for (std::size_t i = 0; i + 1 < k; ++i)
      tower.maps.push_back(inclusion_map((*stages)[i + 1], spec.betas[i + 1], (*stages)[i], spec.betas[i]));
    rep.towers.push_back(tower_ranks(tower));
  }
  rep.verdict = Verdict::Consistent;
  if (!all_identical) {
    rep.verdict = Verdict::Inconsistent;
    rep.reasons.push_back("Euclidean and eps-path complexes differ at some stage below eps");
  }
  judge_tower(rep, rep.towers[0], rep.model_betti, "Euclidean tower");
  judge_tower(rep, rep.towers[1], rep.model_betti, "eps-path tower");
  return rep;
}

LimitReport run_projection_check(const ProjectionCheckSpec& spec) {
  check_common(spec.common);
  if (!(spec.beta > 0.0)) throw PreconditionError("beta must be positive");
  if (spec.n < 1) throw PreconditionError("sample size must be positive");
  const MetricChoice metric = spec.common.metric.value_or(default_metric(0.0));

  LimitReport rep;
  rep.experiment = "projection-check";
  rep.spec = {{"model", model_json(spec.model)},
              {"beta", spec.beta},
              {"n", spec.n},
              {"common", common_json(spec.common, metric)}};
  rep.model_betti = padded_betti(spec.model, spec.common.dim);
  rep.notes = {kNoteHomology,
               "the shadow projection is realized on homology by the subdivision chain map "
               "followed by the carrier map into the nerve of maximal-simplex hulls"};

  Sample sample = sample_with_footpoints({spec.model, spec.n, 0.0, spec.common.seed, SampleScheme::Stratified});
  rep.stages.push_back({spec.beta, 0.0, spec.n});
  ConditionReport c = check_scale_conditions(spec.model, spec.beta, 0.0);
  c.add(density_hypothesis(spec.model.density_radius(sample.params), spec.beta));
  rep.conditions.push_back(std::move(c));
  apply_faults(rep, spec.common.faults);
  const bool in_regime = regime_ok(rep);

  const MetricMatrix d = experiment_metric(spec.model, sample, metric);
  auto k = std::make_shared<SimplicialComplex>(build_rips(d, spec.beta, spec.common.cap));
  CliqueList cliques = maximal_cliques(d, spec.beta, spec.common.clique_budget);
  auto nerve = std::make_shared<SimplicialComplex>(
      build_nerve(ConvexCellSystem(sample.points, cliques), spec.common.cap).complex);
  Subdivision sd = barycentric_subdivision(*k);
  SimplicialMap carrier = carrier_map_to_nerve(sd, cliques, nerve);

  const int m = spec.common.dim;
  Homology hk(k, m), hsd(sd.complex, m), hn(nerve, m);
  auto a = induced_chain_map(hk, hsd, subdivision_chain_map(*k, sd), m);
  auto b = induced_map(carrier, hsd, hn, m);
  std::vector<int> ranks;
  for (int dd = 0; dd <= m; ++dd) ranks.push_back(static_cast<int>((b[dd] * a[dd]).rank()));

  const auto bk = hk.betti(), bs = hsd.betti(), bn = hn.betti();
  bool iso = true;
  for (int dd = 0; dd <= m; ++dd) iso = iso && ranks[dd] == bk[dd] && ranks[dd] == bn[dd];
  rep.details = {{"rips_betti", bk},       {"subdivision_betti", bs},   {"nerve_betti", bn},
                 {"projection_rank", ranks}, {"iso", iso},            {"subdivision_invariant", bs == bk},
                 {"cliques", cliques.size()}, {"rips_simplices", k->size()}};
  if (!in_regime) return rep;

  rep.verdict = Verdict::Consistent;
  if (!iso) {
    rep.verdict = Verdict::Inconsistent;
    rep.reasons.push_back("projection does not induce an isomorphism on homology ranks");
  }
  if (bs != bk) {
    rep.verdict = Verdict::Inconsistent;
    rep.reasons.push_back("subdivision changed Betti numbers");
  }
  if (bk != rep.model_betti) {
    rep.verdict = Verdict::Inconsistent;
    rep.reasons.push_back("Rips Betti numbers differ from the model");
  }
  return rep;
}

FMapResult vertex_level_f_map(const PointCloud& ref, double gamma, const PointCloud& s, double beta, int cap) {
  if (ref.empty() || s.empty()) throw PreconditionError("f-map needs nonempty samples");
  if (ref.dim() != s.dim()) throw PreconditionError("f-map samples differ in dimension");
  FMapResult out;
  out.assignment.resize(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.size(); ++j) {
      double dd = distance(ref[i], s[j]);
      if (dd < best) {
        best = dd;
        out.assignment[i] = static_cast<Index>(j);
      }
    }
    out.max_displacement = std::max(out.max_displacement, best);
  }
  auto src = std::make_shared<SimplicialComplex>(build_rips(euclidean_metric(ref), gamma, cap));
  auto dst = std::make_shared<SimplicialComplex>(build_rips(euclidean_metric(s), beta, cap));
  out.offending = SimplicialMap::first_violation(*src, *dst, out.assignment);
  if (!out.offending) out.map.emplace(src, dst, out.assignment);
  return out;
}

LimitReport run_f_map_check(const FMapCheckSpec& spec) {
  check_common(spec.common);
  if (!(spec.gamma > 0.0) || !(spec.beta > 0.0)) throw PreconditionError("scales must be positive");
  LimitReport rep;
  rep.experiment = "f-map-check";
  rep.spec = {{"model", model_json(spec.model)},
              {"n_ref", spec.n_ref},
              {"gamma", spec.gamma},
              {"n", spec.n},
              {"beta", spec.beta},
              {"common", common_json(spec.common, {MetricKind::Euclidean, 0.0})}};
  rep.model_betti = padded_betti(spec.model, spec.common.dim);
  rep.notes = {kNoteHomology,
               "the partition-of-unity map is replaced by its vertex-level simplicial "
               "approximation: each reference point goes to its nearest sample point"};

  Sample ref = sample_with_footpoints({spec.model, spec.n_ref, 0.0, spec.common.seed, SampleScheme::Stratified});
  Sample s = sample_with_footpoints({spec.model, spec.n, 0.0, spec.common.seed, SampleScheme::Stratified});
  FMapResult f = vertex_level_f_map(ref.points, spec.gamma, s.points, spec.beta, spec.common.cap);

  rep.stages.push_back({spec.beta, 0.0, spec.n});
  ConditionReport c = check_scale_conditions(spec.model, spec.beta, 0.0);
  c.add(density_hypothesis(spec.model.density_radius(s.params), spec.beta));
  Hypothesis h;
  h.name = "f_map_scale";
  h.statement = "gamma + 2 * max nearest-point displacement < beta";
  h.lhs = spec.gamma + 2.0 * f.max_displacement;
  h.rhs = spec.beta;
  h.holds = h.lhs < h.rhs;
  c.add(h);
  rep.conditions.push_back(std::move(c));
  apply_faults(rep, spec.common.faults);
  rep.details["max_displacement"] = f.max_displacement;
  if (f.offending) {
    rep.details["offending_simplex"] = *f.offending;
    rep.reasons.push_back("nearest-point map is not simplicial on a reference simplex");
  }
  if (!regime_ok(rep) || f.offending) {
    rep.verdict = Verdict::OutOfRegime;
    return rep;
  }
  auto mats = induced_map(*f.map, spec.common.dim);
  std::vector<int> ranks;
  for (const auto& m : mats) ranks.push_back(static_cast<int>(m.rank()));
  rep.details["induced_rank"] = ranks;
  rep.verdict = ranks == rep.model_betti ? Verdict::Consistent : Verdict::Inconsistent;
  if (rep.verdict != Verdict::Consistent) rep.reasons.push_back("induced ranks differ from the model");
  return rep;
}

}  // namespace rsl
