#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/conditions.hpp"
#include "rsl/limits.hpp"
#include "rsl/models.hpp"

namespace rsl {

/// Ordered vertex list; when closed the last vertex joins the first.
struct Polyline {
  PointCloud points;
  bool closed = true;

  std::size_t edge_count() const;
  double edge_length(std::size_t e) const;
  nlohmann::json to_json() const;
  void write_csv(std::ostream& out) const;
};

/// Samples sorted by the arc parameter of their projections. Samples with
/// the same projection form a group represented by the member nearest to
/// its projection (ties: lowest index).
struct OrderedSample {
  std::vector<Index> representatives;
  std::vector<double> params;  ///< strictly increasing
  std::vector<std::vector<Index>> groups;
};

/// Throws AmbiguityError naming the first sample with no unique projection.
OrderedSample order_by_projection(const ModelSpace& model, const PointCloud& s);

struct ReconstructionChecks {
  bool simple = false;
  bool closed = false;
  double max_edge = 0.0;
  bool edges_under_beta = false;
  bool in_shadow = false;
  double hausdorff_to_model = 0.0;  ///< includes the discretization allowance
  double hausdorff_bound = 0.0;     ///< tau + zeta + chord sag at scale beta
  bool hausdorff_within_bound = false;
  bool visits_each_once = false;
};

struct ReconstructionResult {
  Polyline curve;
  OrderedSample order;
  ReconstructionChecks checks;
  ConditionReport conditions;
  double zeta_measured = 0.0;
  Verdict verdict = Verdict::Inconsistent;
  std::vector<std::string> reasons;

  nlohmann::json to_json() const;
};

/// Closed polyline through the ordered representatives plus its checks.
/// Out of regime (no curve) when any scale hypothesis fails.
ReconstructionResult build_curve_K(const ModelSpace& model, const PointCloud& s, double beta,
                                   double tau, double zeta,
                                   const std::set<std::string>& faults = {});

/// Exact test that a closed polyline has no self-intersections other than
/// shared endpoints of consecutive edges.
bool polyline_is_simple(const Polyline& p);

struct LemmaResult {
  bool holds = true;
  std::optional<Point> witness;
  std::size_t samples = 0;
};

/// Projects low-discrepancy points of conv{p_i} and checks that each lands
/// on the shortest arc of the curve containing every p_i.
LemmaResult check_intermediate_lemma(const ModelSpace& model, const PointCloud& points, double beta,
                                     std::size_t samples = 10000);

}  // namespace rsl
