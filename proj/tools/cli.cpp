#include "cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rsl/error.hpp"
#include "rsl/homology.hpp"
#include "rsl/limits.hpp"
#include "rsl/models.hpp"
#include "rsl/oracle.hpp"
#include "rsl/parallel.hpp"
#include "rsl/reconstruct.hpp"
#include "rsl/rips.hpp"
#include "rsl/shadow.hpp"

namespace rsl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"sample",        "rips",         "shadow",      "homology",
                                            "tower",         "compare-metrics", "project-check", "f-map-check",
                                            "reconstruct",   "oracle",       "plot-data"};

template <class T>
std::optional<T> opt_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config field '") + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return opt_field<T>(j, key).value_or(std::move(fallback));
}

json normalize_model(const json& m) {
  if (m.is_null()) return {{"kind", "circle"}, {"params", {{"radius", 1.0}}}};
  if (m.is_string()) return {{"kind", m.get<std::string>()}, {"params", json::object()}};
  if (m.is_object() && m.contains("kind")) {
    json out = m;
    if (!out.contains("params")) out["params"] = json::object();
    return out;
  }
  throw UsageError("config field 'model' must be a kind name or a model record");
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return kExitOk;
    case Verdict::OutOfRegime: return kExitOutOfRegime;
    case Verdict::Inconsistent: return kExitError;
  }
  return kExitError;
}

ModelSpace make_model(const ExperimentConfig& c) {
  try {
    return ModelSpace::from_json(c.model);
  } catch (const SchemaError& e) {
    throw UsageError(std::string("model: ") + e.what());
  }
}

template <class T>
T require(const std::optional<T>& v, const char* flag, const std::string& command) {
  if (!v) throw UsageError(command + " needs --" + std::string(flag));
  return *v;
}

void require_positive(double v, const char* flag) {
  if (!(v > 0.0)) throw UsageError(std::string("--") + flag + " must be positive");
}

void require_nonnegative(double v, const char* flag) {
  if (!(v >= 0.0)) throw UsageError(std::string("--") + flag + " must be nonnegative");
}

int cap_of(const ExperimentConfig& c) { return c.cap.value_or(std::max(kDefaultCap, c.dim + 1)); }

ExperimentCommon common_of(const ExperimentConfig& c) {
  ExperimentCommon e;
  e.dim = c.dim;
  e.cap = cap_of(c);
  e.seed = c.seed;
  e.faults = std::set<std::string>(c.faults.begin(), c.faults.end());
  if (c.metric) {
    MetricChoice m;
    m.kind = parse_metric(*c.metric);
    if (m.kind == MetricKind::EpsilonPath) m.eps = require(c.eps, "eps", "the epsilon-path metric");
    e.metric = m;
  }
  if (e.cap < e.dim + 1) throw UsageError("--cap must be at least --dim + 1");
  return e;
}

SampleScheme scheme_of(const ExperimentConfig& c, SampleScheme fallback) {
  if (!c.scheme) return fallback;
  try {
    return parse_scheme(*c.scheme);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

// Point source for rips/shadow/homology: a CSV file or a model sample.
struct Source {
  std::optional<ModelSpace> model;
  Sample sample;
  double tau = 0.0;
};

Source load_source(const ExperimentConfig& c) {
  Source s;
  if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw UsageError("cannot read --input " + c.input);
    s.sample.points = read_csv(in);
    return s;
  }
  s.model = make_model(c);
  s.tau = c.tau.value_or(0.0);
  require_nonnegative(s.tau, "tau");
  SamplerSpec spec{*s.model, require(c.n, "n", c.command), s.tau, c.seed, scheme_of(c, SampleScheme::Stratified)};
  s.sample = sample_with_footpoints(spec);
  return s;
}

MetricMatrix source_metric(const ExperimentConfig& c, const Source& s) {
  MetricChoice choice;
  if (c.metric) {
    choice.kind = parse_metric(*c.metric);
    if (choice.kind == MetricKind::EpsilonPath) choice.eps = require(c.eps, "eps", "the epsilon-path metric");
  } else if (s.model) {
    choice = default_metric(s.tau);
  }
  if (!s.model) {
    if (choice.kind == MetricKind::Geodesic) throw UsageError("the geodesic metric needs a model sample");
    return choice.kind == MetricKind::EpsilonPath ? epsilon_path_metric(s.sample.points, choice.eps)
                                                  : euclidean_metric(s.sample.points);
  }
  return experiment_metric(*s.model, s.sample, choice);
}

json chain_json(const SimplicialComplex& k, int dim, const Chain& chain) {
  json out = json::array();
  for (auto i : chain) out.push_back(k.simplices(dim)[i]);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_sample(const ExperimentConfig& c, json& out) {
  ModelSpace model = make_model(c);
  const double tau = c.tau.value_or(0.0);
  require_nonnegative(tau, "tau");
  SamplerSpec spec{model, require(c.n, "n", c.command), tau, c.seed, scheme_of(c, SampleScheme::Stratified)};
  Sample s = sample_with_footpoints(spec);
  json pts = json::array();
  for (std::size_t i = 0; i < s.points.size(); ++i) pts.push_back(s.points.point(i));
  out["points"] = std::move(pts);
  out["params"] = s.params;
  return kExitOk;
}

int cmd_rips(const ExperimentConfig& c, json& out) {
  const double beta = require(c.beta, "beta", c.command);
  require_positive(beta, "beta");
  Source s = load_source(c);
  const int cap = cap_of(c);
  SimplicialComplex k = build_rips(source_metric(c, s), beta, cap);
  std::vector<std::size_t> counts;
  for (int d = 0; d <= cap; ++d) counts.push_back(k.count(d));
  out["counts"] = counts;
  out["betti"] = betti(k, std::min(c.dim, cap - 1));
  out["complex"] = k.to_json();
  return kExitOk;
}

int cmd_shadow(const ExperimentConfig& c, json& out) {
  const double beta = require(c.beta, "beta", c.command);
  require_positive(beta, "beta");
  Source s = load_source(c);
  const int cap = cap_of(c);
  CliqueList cliques = maximal_cliques(source_metric(c, s), beta, kDefaultCliqueBudget);
  ConvexCellSystem cells(s.sample.points, cliques);
  NerveComplex nerve = build_nerve(cells, cap);
  out["betti"] = betti(nerve.complex, std::min(c.dim, cap - 1));
  if (s.sample.points.dim() == 2) {
    RasterBetti r = raster_betti_2d(cells, c.resolution, c.pgm);
    out["raster"] = {{"b0", r.b0}, {"b1", r.b1}, {"resolution", r.resolution}};
  } else {
    out["raster"] = nullptr;
  }
  out["cliques"] = cliques.to_json();
  out["nerve"] = nerve.to_json();
  return kExitOk;
}

int cmd_homology(const ExperimentConfig& c, json& out) {
  std::shared_ptr<const SimplicialComplex> k;
  if (!c.input.empty() && fs::path(c.input).extension() == ".json") {
    std::ifstream in(c.input);
    if (!in) throw UsageError("cannot read --input " + c.input);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("--input is not valid JSON: " + std::string(e.what()));
    }
    k = std::make_shared<SimplicialComplex>(SimplicialComplex::from_json(j.contains("complex") ? j["complex"] : j));
  } else {
    const double beta = require(c.beta, "beta", c.command);
    require_positive(beta, "beta");
    Source s = load_source(c);
    k = std::make_shared<SimplicialComplex>(build_rips(source_metric(c, s), beta, cap_of(c)));
  }
  const int up_to = std::min(c.dim, k->cap() - 1);
  if (up_to < 0) throw UsageError("complex cap is too small for homology");
  Homology h(k, up_to);
  out["betti"] = h.betti();
  json reps = json::array();
  for (int d = 0; d <= up_to; ++d) {
    json dim_reps = json::array();
    for (const auto& chain : h.representatives(d)) dim_reps.push_back(chain_json(*k, d, chain));
    reps.push_back(std::move(dim_reps));
  }
  out["representatives"] = std::move(reps);
  return kExitOk;
}

int report_exit(const LimitReport& r, json& out) {
  out["report"] = r.to_json();
  return verdict_exit(r.verdict);
}

int cmd_tower(const ExperimentConfig& c, json& out) {
  const bool grid = !c.beta_grid.empty(), seq = !c.n_seq.empty();
  if (grid == seq) throw UsageError("tower needs exactly one of --beta-grid (inverse) or --n-seq (direct)");
  ExperimentCommon common = common_of(c);
  const double tau = c.tau.value_or(0.0);
  require_nonnegative(tau, "tau");
  if (grid) {
    if (c.beta_grid.size() < 2) throw UsageError("--beta-grid needs at least two values");
    for (double b : c.beta_grid) require_positive(b, "beta-grid");
    for (std::size_t i = 1; i < c.beta_grid.size(); ++i)
      if (!(c.beta_grid[i] < c.beta_grid[i - 1]))
        throw UsageError("--beta-grid must be strictly decreasing (scales shrink along an inverse system)");
    if (!c.tau_grid.empty()) {
      if (c.tau_grid.size() != c.beta_grid.size()) throw UsageError("--tau-grid must match --beta-grid in length");
      for (std::size_t i = 0; i < c.tau_grid.size(); ++i) {
        require_nonnegative(c.tau_grid[i], "tau-grid");
        if (i > 0 && c.tau_grid[i] > c.tau_grid[i - 1]) throw UsageError("--tau-grid must be nonincreasing");
      }
    }
    InverseSystemSpec spec{make_model(c), c.beta_grid, c.tau_grid, tau, c.n,
                           c.object ? parse_object(*c.object) : ObjectKind::ShadowNerve,
                           scheme_of(c, SampleScheme::Stratified), common};
    return report_exit(run_inverse_system(spec), out);
  }
  for (std::size_t i = 1; i < c.n_seq.size(); ++i)
    if (c.n_seq[i] < c.n_seq[i - 1]) throw UsageError("--n-seq must be nondecreasing");
  const double beta = require(c.beta, "beta", "a direct tower");
  require_positive(beta, "beta");
  DirectSystemSpec spec{make_model(c), beta, c.n_seq, tau, c.object ? parse_object(*c.object) : ObjectKind::Rips,
                        scheme_of(c, SampleScheme::DenseEnumeration), common};
  return report_exit(run_direct_system(spec), out);
}

int cmd_compare_metrics(const ExperimentConfig& c, json& out) {
  if (c.beta_grid.empty()) throw UsageError("compare-metrics needs --beta-grid");
  for (std::size_t i = 1; i < c.beta_grid.size(); ++i)
    if (!(c.beta_grid[i] < c.beta_grid[i - 1])) throw UsageError("--beta-grid must be strictly decreasing");
  MetricComparisonSpec spec{make_model(c), c.beta_grid, c.tau.value_or(0.0), require(c.eps, "eps", c.command),
                            c.n, 2.0, common_of(c)};
  return report_exit(run_metric_comparability(spec), out);
}

int cmd_project_check(const ExperimentConfig& c, json& out) {
  ProjectionCheckSpec spec{make_model(c), require(c.beta, "beta", c.command), require(c.n, "n", c.command),
                           common_of(c)};
  return report_exit(run_projection_check(spec), out);
}

int cmd_f_map_check(const ExperimentConfig& c, json& out) {
  FMapCheckSpec spec{make_model(c),
                     require(c.n_ref, "n-ref", c.command),
                     require(c.gamma, "gamma", c.command),
                     require(c.n, "n", c.command),
                     require(c.beta, "beta", c.command),
                     common_of(c)};
  return report_exit(run_f_map_check(spec), out);
}

int cmd_reconstruct(const ExperimentConfig& c, json& out) {
  ModelSpace model = make_model(c);
  if (!model.is_closed_curve()) throw UsageError("reconstruct needs a closed curve model");
  const double beta = require(c.beta, "beta", c.command);
  const double zeta = require(c.zeta, "zeta", c.command);
  const double tau = c.tau.value_or(0.0);
  require_positive(beta, "beta");
  require_positive(zeta, "zeta");
  require_nonnegative(tau, "tau");
  SamplerSpec spec{model, require(c.n, "n", c.command), tau, c.seed, scheme_of(c, SampleScheme::Stratified)};
  PointCloud s = sample(spec);
  ReconstructionResult r =
      build_curve_K(model, s, beta, tau, zeta, std::set<std::string>(c.faults.begin(), c.faults.end()));
  out["result"] = r.to_json();
  return verdict_exit(r.verdict);
}

// Randomized agreement between the main pipeline and the brute-force oracles.
int cmd_oracle(const ExperimentConfig& c, json& out) {
  const std::size_t count = c.n.value_or(200);
  struct Case {
    bool rips_ok = true, homology_ok = true;
    std::size_t pairs = 0, contradictions = 0, advisory = 0;
  };
  std::vector<Case> cases(count);
  parallel_for(count, [&](std::size_t t) {
    std::mt19937_64 g(c.seed * 1000003u + t);
    const std::size_t n = 3 + g() % 10;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({unit_uniform(g()), unit_uniform(g())});
    PointCloud cloud = PointCloud::from_points(pts);
    MetricMatrix m = euclidean_metric(cloud);
    const double beta = 0.2 + 0.6 * unit_uniform(g());
    Case& out_case = cases[t];
    SimplicialComplex main = build_rips(m, beta, 3);
    out_case.rips_ok = main.to_json() == brute_rips(m, beta, 3).to_json();
    std::vector<int> b = betti(main, 2);
    for (int d = 0; d <= 2; ++d) out_case.homology_ok = out_case.homology_ok && b[d] == brute_homology(main, d);
    ConvexCellSystem cells(cloud, maximal_cliques(m, beta, kDefaultCliqueBudget));
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        std::size_t ids[] = {i, j};
        const bool lp = hulls_intersect(cells, ids);
        const bool grid = brute_hull_intersection(cells, ids, c.resolution);
        ++out_case.pairs;
        if (grid && !lp) ++out_case.contradictions;
        if (lp && !grid) ++out_case.advisory;
      }
  });
  std::size_t rips_bad = 0, hom_bad = 0, pairs = 0, contra = 0, adv = 0;
  for (const auto& k : cases) {
    rips_bad += !k.rips_ok;
    hom_bad += !k.homology_ok;
    pairs += k.pairs;
    contra += k.contradictions;
    adv += k.advisory;
  }
  out["instances"] = count;
  out["rips_mismatches"] = rips_bad;
  out["homology_mismatches"] = hom_bad;
  out["hull_pairs"] = pairs;
  out["hull_contradictions"] = contra;
  out["hull_advisory_misses"] = adv;
  return rips_bad + hom_bad + contra == 0 ? kExitOk : kExitError;
}

// ---------------------------------------------------------------------------

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + " is missing field '" + key + "'");
  return j.at(key);
}

std::string rank_table_csv(const json& tower, std::size_t dim_index) {
  const json& table = need(tower, "rank_table", "tower");
  const std::size_t k = need(tower, "stages", "tower").size();
  std::ostringstream os;
  os << "stage";
  for (std::size_t j = 0; j < k; ++j) os << ',' << j;
  os << '\n';
  if (dim_index >= table.size()) return os.str();
  const json& rows = table.at(dim_index);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << i;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      os << ',';
      if (!rows[i][j].is_null()) os << rows[i][j].get<int>();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

json ExperimentConfig::to_json() const {
  json j{{"command", command}, {"model", model}, {"dim", dim}, {"seed", seed}, {"resolution", resolution}};
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("beta", beta);
  put("tau", tau);
  put("n", n);
  put("zeta", zeta);
  put("eps", eps);
  put("object", object);
  put("metric", metric);
  put("scheme", scheme);
  put("cap", cap);
  put("gamma", gamma);
  put("n_ref", n_ref);
  if (!beta_grid.empty()) j["beta_grid"] = beta_grid;
  if (!tau_grid.empty()) j["tau_grid"] = tau_grid;
  if (!n_seq.empty()) j["n_seq"] = n_seq;
  if (!faults.empty()) j["inject_fault"] = faults;
  if (!input.empty()) j["input"] = input;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known = {
      "command", "model", "beta",  "beta_grid", "tau",   "tau_grid", "n",          "n_seq", "zeta",
      "eps",     "object", "metric", "scheme",  "dim",   "cap",      "seed",       "inject_fault",
      "gamma",   "n_ref",  "resolution", "input", "out", "pgm"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw UsageError("unknown config field '" + key + "'");
  ExperimentConfig c;
  c.command = field_or<std::string>(j, "command", "");
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw UsageError("unknown command '" + c.command + "'");
  c.model = normalize_model(j.value("model", json()));
  c.beta = opt_field<double>(j, "beta");
  c.beta_grid = field_or<std::vector<double>>(j, "beta_grid", {});
  c.tau = opt_field<double>(j, "tau");
  c.tau_grid = field_or<std::vector<double>>(j, "tau_grid", {});
  c.n = opt_field<std::size_t>(j, "n");
  c.n_seq = field_or<std::vector<std::size_t>>(j, "n_seq", {});
  c.zeta = opt_field<double>(j, "zeta");
  c.eps = opt_field<double>(j, "eps");
  c.object = opt_field<std::string>(j, "object");
  c.metric = opt_field<std::string>(j, "metric");
  c.scheme = opt_field<std::string>(j, "scheme");
  c.dim = field_or<int>(j, "dim", 1);
  c.cap = opt_field<int>(j, "cap");
  c.seed = field_or<std::uint64_t>(j, "seed", 0);
  c.faults = field_or<std::vector<std::string>>(j, "inject_fault", {});
  c.gamma = opt_field<double>(j, "gamma");
  c.n_ref = opt_field<std::size_t>(j, "n_ref");
  c.resolution = field_or<int>(j, "resolution", 64);
  c.input = field_or<std::string>(j, "input", "");
  c.out = field_or<std::string>(j, "out", "");
  c.pgm = field_or<std::string>(j, "pgm", "");
  if (c.dim < 0) throw UsageError("--dim must be nonnegative");
  if (c.resolution <= 0) throw UsageError("--resolution must be positive");
  if (c.object) {
    try {
      parse_object(*c.object);
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  }
  if (c.metric) {
    try {
      parse_metric(*c.metric);
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  }
  return c;
}

void write_atomic(const fs::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::vector<fs::path> emit_plot_data(const json& report, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  const json* body = &report;
  if (report.contains("report")) body = &report.at("report");
  if (report.contains("result")) body = &report.at("result");

  if (body->contains("towers")) {
    const json& stages = need(*body, "stages", "report");
    const json& towers = need(*body, "towers", "report");
    if (!towers.is_array()) throw SchemaError("report field 'towers' is not a list");
    std::ostringstream os;
    os << "stage,beta,n,rank_m\n";
    if (!towers.empty()) {
      const json& t0 = towers.at(0);
      const json& dims = need(t0, "dims", "tower");
      const json& tstages = need(t0, "stages", "tower");
      const int m = dims.empty() ? 0 : dims.back().get<int>();
      for (std::size_t i = 0; i < tstages.size(); ++i) {
        const json& betti = need(tstages[i], "betti", "tower stage");
        const json& st = i < stages.size() ? stages[i] : tstages[i];
        os << i << ',' << fmt(need(st, "beta", "stage").get<double>()) << ','
           << need(st, "n", "stage").get<std::size_t>() << ','
           << (static_cast<std::size_t>(m) < betti.size() ? betti[m].get<int>() : 0) << '\n';
      }
    }
    write_atomic(dir / "stages.csv", os.str());
    written.push_back(dir / "stages.csv");
    for (std::size_t t = 0; t < towers.size(); ++t) {
      const json& dims = need(towers[t], "dims", "tower");
      const std::size_t di = dims.empty() ? 0 : dims.size() - 1;
      fs::path p = dir / (t == 0 ? "rank_table.csv" : "rank_table_" + std::to_string(t) + ".csv");
      write_atomic(p, rank_table_csv(towers[t], di));
      written.push_back(p);
    }
    if (towers.empty()) {
      write_atomic(dir / "rank_table.csv", "stage\n");
      written.push_back(dir / "rank_table.csv");
    }
    return written;
  }
  if (body->contains("curve")) {
    const json& curve = body->at("curve");
    std::ostringstream os;
    if (curve.is_null()) {
      os << "index\n";
    } else {
      const json& verts = need(curve, "vertices", "curve");
      const std::size_t d = verts.empty() ? 0 : verts[0].size();
      os << "index";
      for (std::size_t c = 0; c < d; ++c) os << ",x" << c;
      os << '\n';
      for (std::size_t i = 0; i < verts.size(); ++i) {
        os << i;
        for (const auto& x : verts[i]) os << ',' << fmt(x.get<double>());
        os << '\n';
      }
    }
    write_atomic(dir / "curve.csv", os.str());
    written.push_back(dir / "curve.csv");
    return written;
  }
  throw SchemaError("report has neither a 'towers' field nor a 'curve' field");
}

int run_config(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "plot-data") {
      if (c.input.empty() || c.out.empty()) throw UsageError("plot-data needs --input REPORT and --out DIR");
      std::ifstream in(c.input);
      if (!in) throw UsageError("cannot read --input " + c.input);
      json report;
      try {
        report = json::parse(in);
      } catch (const json::exception& e) {
        throw SchemaError(std::string("report is not valid JSON: ") + e.what());
      }
      for (const auto& p : emit_plot_data(report, c.out)) out << p.string() << '\n';
      return kExitOk;
    }
    json body{{"command", c.command}, {"config", c.to_json()}};
    int code = kExitOk;
    if (c.command == "sample") code = cmd_sample(c, body);
    else if (c.command == "rips") code = cmd_rips(c, body);
    else if (c.command == "shadow") code = cmd_shadow(c, body);
    else if (c.command == "homology") code = cmd_homology(c, body);
    else if (c.command == "tower") code = cmd_tower(c, body);
    else if (c.command == "compare-metrics") code = cmd_compare_metrics(c, body);
    else if (c.command == "project-check") code = cmd_project_check(c, body);
    else if (c.command == "f-map-check") code = cmd_f_map_check(c, body);
    else if (c.command == "reconstruct") code = cmd_reconstruct(c, body);
    else if (c.command == "oracle") code = cmd_oracle(c, body);
    else throw UsageError("unknown command '" + c.command + "'");

    std::string text;
    if (c.command == "sample" && fs::path(c.out).extension() == ".csv") {
      std::ostringstream os;
      write_csv(os, PointCloud::from_points(body["points"].get<std::vector<Point>>()));
      text = os.str();
    } else {
      text = dump(body);
    }
    if (c.out.empty()) out << text;
    else write_atomic(c.out, text);

    const json* verdict = nullptr;
    if (body.contains("report")) verdict = &body["report"]["verdict"];
    if (body.contains("result")) verdict = &body["result"]["verdict"];
    if (verdict) err << "verdict: " << verdict->get<std::string>() << '\n';
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rips complexes, shadows and homology towers of sampled spaces"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string config_path, model_kind;
  std::optional<double> radius, scale;
  json overlay = json::object();
  std::vector<std::function<void()>> collect;

  auto num = [&](const char* flag, const char* key, const char* help) {
    auto holder = std::make_shared<double>();
    CLI::Option* o = app.add_option(flag, *holder, help);
    collect.push_back([o, holder, key, &overlay] {
      if (o->count()) overlay[key] = *holder;
    });
  };
  auto integer = [&](const char* flag, const char* key, const char* help) {
    auto holder = std::make_shared<std::int64_t>();
    CLI::Option* o = app.add_option(flag, *holder, help);
    collect.push_back([o, holder, key, &overlay] {
      if (o->count()) {
        if (*holder < 0) throw UsageError(std::string(key) + " must be nonnegative");
        overlay[key] = *holder;
      }
    });
  };
  auto text = [&](const char* flag, const char* key, const char* help) {
    auto holder = std::make_shared<std::string>();
    CLI::Option* o = app.add_option(flag, *holder, help);
    collect.push_back([o, holder, key, &overlay] {
      if (o->count()) overlay[key] = *holder;
    });
  };
  auto list = [&](const char* flag, const char* key, const char* help, auto tag) {
    using T = decltype(tag);
    auto holder = std::make_shared<std::vector<T>>();
    CLI::Option* o = app.add_option(flag, *holder, help)->delimiter(',');
    collect.push_back([o, holder, key, &overlay] {
      if (o->count()) overlay[key] = *holder;
    });
  };

  app.add_option("--config", config_path, "JSON config file; flags override its fields");
  app.add_option("--model", model_kind, "Model space: circle, trefoil or theta (default circle)");
  app.add_option("--radius", radius, "Circle radius");
  app.add_option("--scale", scale, "Trefoil or theta scale");
  num("--beta", "beta", "Rips scale");
  list("--beta-grid", "beta_grid", "Comma-separated scales, strictly decreasing", double{});
  num("--tau", "tau", "Noise radius");
  list("--tau-grid", "tau_grid", "Comma-separated noise radii, one per scale", double{});
  integer("--n", "n", "Sample size (oracle: number of random instances)");
  list("--n-seq", "n_seq", "Comma-separated nondecreasing sample sizes (direct tower)", std::int64_t{});
  num("--zeta", "zeta", "Sample density bound");
  num("--eps", "eps", "Epsilon-path threshold");
  num("--gamma", "gamma", "Reference scale for f-map-check");
  integer("--n-ref", "n_ref", "Reference sample size for f-map-check");
  text("--object", "object", "rips or shadow-nerve");
  text("--metric", "metric", "euclidean, epsilon-path or geodesic");
  text("--scheme", "scheme", "stratified, uniform-arc or dense-enumeration");
  integer("--dim", "dim", "Highest homology dimension (default 1)");
  integer("--cap", "cap", "Dimension cap of built complexes (default max(2, dim+1))");
  integer("--seed", "seed", "Random seed (default 0)");
  integer("--resolution", "resolution", "Raster or grid resolution (default 64)");
  text("--input", "input", "Input file: point CSV, complex JSON or report JSON");
  text("--out", "out", "Output path (directory for plot-data); stdout when absent");
  text("--pgm", "pgm", "Write the raster oracle image to this PGM file");
  auto faults = std::make_shared<std::vector<std::string>>();
  CLI::Option* fault_opt = app.add_option("--inject-fault", *faults, "Force a named hypothesis to fail (repeatable)");

  std::string command;
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, "");
    if (name == "oracle") sub->group("");
    sub->callback([&command, name] { command = name; });
  }
  app.get_subcommand("sample")->description("Sample a model space; JSON, or CSV when --out ends in .csv");
  app.get_subcommand("rips")->description("Build the Rips complex of a sample or point CSV");
  app.get_subcommand("shadow")->description("Maximal cliques, shadow nerve and (in the plane) raster Betti numbers");
  app.get_subcommand("homology")->description("Z/2 Betti numbers and cycle representatives");
  app.get_subcommand("tower")->description("Inverse (--beta-grid) or direct (--n-seq) homology tower");
  app.get_subcommand("compare-metrics")->description("Euclidean versus epsilon-path Rips towers on one noisy sample");
  app.get_subcommand("project-check")->description("Rips -> subdivision -> nerve rank check at one scale");
  app.get_subcommand("f-map-check")->description("Nearest-point vertex map between two samples");
  app.get_subcommand("reconstruct")->description("Closed polyline through a noisy curve sample, with checks");
  app.get_subcommand("plot-data")->description("CSV tables from a report (--input) into a directory (--out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    json merged = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read --config " + config_path);
      try {
        merged = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError("config is not valid JSON: " + std::string(e.what()));
      }
      if (!merged.is_object()) throw UsageError("config must be a JSON object");
    }
    for (auto& f : collect) f();
    if (fault_opt->count()) overlay["inject_fault"] = *faults;
    overlay["command"] = command;
    for (auto& [key, value] : overlay.items()) merged[key] = value;

    json model = normalize_model(merged.value("model", json()));
    if (!model_kind.empty()) model = normalize_model(json(model_kind));
    if (radius) model["params"]["radius"] = *radius;
    if (scale) model["params"]["scale"] = *scale;
    merged["model"] = model;

    return run_config(config_from_json(merged), out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace rsl::cli
