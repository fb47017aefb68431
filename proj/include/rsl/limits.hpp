#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/conditions.hpp"
#include "rsl/homology.hpp"
#include "rsl/models.hpp"
#include "rsl/rips.hpp"

namespace rsl {

enum class ObjectKind { Rips, ShadowNerve };
enum class MetricKind { Euclidean, EpsilonPath, Geodesic };
enum class Verdict { Consistent, Inconsistent, OutOfRegime };

ObjectKind parse_object(const std::string& s);
std::string object_name(ObjectKind k);
MetricKind parse_metric(const std::string& s);
std::string metric_name(MetricKind k);
std::string verdict_name(Verdict v);

struct MetricChoice {
  MetricKind kind = MetricKind::Euclidean;
  double eps = 0.0;  ///< for EpsilonPath
};

/// Geodesic on noiseless samples, Euclidean on noisy ones.
MetricChoice default_metric(double tau);

/// Settings shared by every experiment.
struct ExperimentCommon {
  int dim = 1;  ///< highest homology dimension compared
  int cap = kDefaultCap;
  std::uint64_t seed = 0;
  std::optional<MetricChoice> metric;
  std::set<std::string> faults;  ///< hypotheses forced false at every stage
  std::size_t clique_budget = kDefaultCliqueBudget;
};

struct DirectSystemSpec {
  ModelSpace model;
  double beta = 0.0;
  std::vector<std::size_t> sizes;  ///< nondecreasing; samples are prefixes
  double tau = 0.0;
  ObjectKind object = ObjectKind::Rips;
  SampleScheme scheme = SampleScheme::DenseEnumeration;
  ExperimentCommon common;
};

struct InverseSystemSpec {
  ModelSpace model;
  std::vector<double> betas;  ///< strictly decreasing
  std::vector<double> taus;   ///< empty: tau everywhere; else nonincreasing, one per beta
  double tau = 0.0;
  std::optional<std::size_t> n;  ///< default: dense enough for the smallest beta
  ObjectKind object = ObjectKind::ShadowNerve;
  SampleScheme scheme = SampleScheme::Stratified;
  ExperimentCommon common;
};

struct StageInfo {
  double beta = 0.0;
  double tau = 0.0;
  std::size_t n = 0;
};

struct LimitReport {
  std::string experiment;
  nlohmann::json spec;
  std::vector<StageInfo> stages;
  std::vector<ConditionReport> conditions;  ///< one per stage
  std::vector<TowerReport> towers;          ///< usually one; two for metric comparison
  std::vector<int> model_betti;
  Verdict verdict = Verdict::Inconsistent;
  std::vector<std::string> reasons;
  std::vector<std::string> notes;
  nlohmann::json details = nlohmann::json::object();

  bool conditions_hold() const;
  nlohmann::json to_json() const;
};

/// Sample count whose stratified sample is dense enough for every stage.
std::size_t auto_sample_count(const ModelSpace& model, double beta_min, double tau_min);

MetricMatrix experiment_metric(const ModelSpace& model, const Sample& sample, const MetricChoice& choice);

LimitReport run_direct_system(const DirectSystemSpec& spec);
LimitReport run_inverse_system(const InverseSystemSpec& spec);

struct MetricComparisonSpec {
  ModelSpace model;
  std::vector<double> betas;  ///< strictly decreasing, all below eps
  double tau = 0.0;
  double eps = 0.0;
  std::optional<std::size_t> n;
  double kappa_max = 2.0;  ///< admissible ratio d_eps / |p - q|
  ExperimentCommon common;
};

/// Rips towers under the Euclidean and eps-path metrics on one noisy sample.
LimitReport run_metric_comparability(const MetricComparisonSpec& spec);

struct ProjectionCheckSpec {
  ModelSpace model;
  double beta = 0.0;
  std::size_t n = 0;
  ExperimentCommon common;
};

/// Rank of H(R_beta(S)) -> H(Sd) -> H(nerve) against both Betti numbers.
LimitReport run_projection_check(const ProjectionCheckSpec& spec);

struct FMapResult {
  std::optional<SimplicialMap> map;
  std::optional<Simplex> offending;  ///< first source simplex with a non-simplex image
  std::vector<Index> assignment;     ///< reference vertex -> nearest sample point
  double max_displacement = 0.0;     ///< largest distance to the assigned point
};

/// Nearest-point vertex map R_gamma(ref) -> R_beta(S) (ties: lowest index).
FMapResult vertex_level_f_map(const PointCloud& ref, double gamma, const PointCloud& s, double beta,
                              int cap = kDefaultCap);

struct FMapCheckSpec {
  ModelSpace model;
  std::size_t n_ref = 0;
  double gamma = 0.0;
  std::size_t n = 0;
  double beta = 0.0;
  ExperimentCommon common;
};

LimitReport run_f_map_check(const FMapCheckSpec& spec);

}  // namespace rsl
