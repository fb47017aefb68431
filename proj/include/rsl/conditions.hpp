#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/models.hpp"

namespace rsl {

/// One named inequality lhs < rhs (or lhs <= rhs when noted in the
/// statement), evaluated at the experiment's scales.
struct Hypothesis {
  std::string name;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::optional<double> delta;  ///< metric comparison scale used, if any
  bool injected = false;        ///< forced false by fault injection
};

struct ConditionReport {
  double beta = 0.0;
  double tau = 0.0;
  std::optional<double> zeta;
  std::vector<Hypothesis> hypotheses;
  double nu = 0.0;  ///< displacement bound (1/2 + xi) beta + xi eps_beta
  double mu = 0.0;  ///< noisy displacement bound 3 beta/2 + 2 eps_tau + eps_{beta+tau}

  bool all_hold() const;
  std::vector<std::string> failed() const;
  const Hypothesis* find(const std::string& name) const;
  void add(Hypothesis h);
  /// Forces the named hypotheses false. Names that were not evaluated at
  /// these scales are appended as failed entries so the fault is visible.
  void inject_faults(const std::set<std::string>& names);
  nlohmann::json to_json() const;
};

/// All names check_scale_conditions or the experiment drivers can emit.
const std::vector<std::string>& known_hypotheses();

/// Evaluates every scale hypothesis that applies to the model at (beta, tau)
/// and, if given, the projection density zeta. Closed-curve-only conditions
/// are skipped for graphs; noise conditions are skipped when tau == 0.
ConditionReport check_scale_conditions(const ModelSpace& model, double beta, double tau,
                                       std::optional<double> zeta = std::nullopt);

}  // namespace rsl
