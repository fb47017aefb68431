#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/complex.hpp"
#include "rsl/metric.hpp"

namespace rsl {

inline constexpr std::size_t kDefaultCliqueBudget = 200000;
inline constexpr int kDefaultCap = 2;

/// Vietoris-Rips complex: a tuple is a simplex iff all pairwise distances are
/// strictly below beta. Infinite distances are never joined.
SimplicialComplex build_rips(const MetricMatrix& metric, double beta, int cap = kDefaultCap);

/// Inclusion-maximal vertex sets of pairwise distance < beta, uncapped,
/// each sorted and the list in lexicographic order.
struct CliqueList {
  std::size_t n = 0;
  std::vector<Simplex> cliques;

  std::size_t size() const { return cliques.size(); }
  nlohmann::json to_json() const;
  static CliqueList from_json(const nlohmann::json& j);
  bool operator==(const CliqueList&) const = default;
};

/// Throws ResourceError once more than `budget` cliques have been found.
CliqueList maximal_cliques(const MetricMatrix& metric, double beta,
                           std::size_t budget = kDefaultCliqueBudget);

/// Inclusion of R_gamma(S) into R_beta(T) with S embedded into T by
/// `embedding` (empty = identity). Requires gamma <= beta.
SimplicialMap inclusion_map(std::shared_ptr<const SimplicialComplex> src, double gamma,
                            std::shared_ptr<const SimplicialComplex> dst, double beta,
                            std::vector<Index> embedding = {});

}  // namespace rsl
