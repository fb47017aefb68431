#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/complex.hpp"
#include "rsl/rips.hpp"

namespace rsl {

/// Dense matrix over the two-element field.
class MatrixZ2 {
 public:
  MatrixZ2() = default;
  MatrixZ2(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, 0) {}
  static MatrixZ2 identity(std::size_t n);
  static MatrixZ2 from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool get(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  void set(std::size_t i, std::size_t j, bool v) { a_[i * c_ + j] = v; }
  std::size_t rank() const;
  bool is_zero() const;

  MatrixZ2 operator*(const MatrixZ2& o) const;
  bool operator==(const MatrixZ2&) const = default;
  nlohmann::json to_json() const;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<std::uint8_t> a_;
};

/// Chain over Z/2: ascending indices into one dimension's simplex list.
using Chain = std::vector<std::uint32_t>;

/// Symmetric difference of two sorted chains.
Chain add_chains(const Chain& a, const Chain& b);

/// Boundary of the i-th k-simplex as a (k-1)-chain.
Chain boundary(const SimplicialComplex& k, int dim, std::size_t i);

/// Homology of a complex in dimensions 0..up_to with cycle representatives.
/// Requires up_to <= cap - 1 so no cycle is truncated by the cap.
class Homology {
 public:
  Homology(std::shared_ptr<const SimplicialComplex> complex, int up_to);

  const SimplicialComplex& complex() const { return *k_; }
  std::shared_ptr<const SimplicialComplex> complex_ptr() const { return k_; }
  int up_to() const { return up_to_; }
  std::vector<int> betti() const;
  int rank(int dim) const { return static_cast<int>(reps_.at(dim).size()); }
  /// Cycle representatives, ordered by their leading simplex.
  const std::vector<Chain>& representatives(int dim) const { return reps_.at(dim); }
  /// Coordinates of the class of a cycle in the representative basis.
  /// Throws InternalError if the chain is not a cycle.
  std::vector<std::uint8_t> coordinates(int dim, Chain cycle) const;

 private:
  struct Pivot {
    Chain chain;
    int rep = -1;  ///< representative index, or -1 for a boundary
  };
  std::shared_ptr<const SimplicialComplex> k_;
  int up_to_;
  std::vector<std::vector<Chain>> reps_;
  std::vector<std::vector<std::optional<Pivot>>> pivots_;  ///< by dim, by leading simplex
};

std::vector<int> betti(const SimplicialComplex& complex, int up_to);

/// Sends the i-th k-simplex of a source complex to a k-chain of a target.
using ChainMapFn = std::function<Chain(int dim, std::size_t simplex)>;

/// Matrices (target rank x source rank) of the map on H_0..H_up_to.
std::vector<MatrixZ2> induced_chain_map(const Homology& source, const Homology& target,
                                        const ChainMapFn& map, int up_to);

/// Map on homology of a simplicial map; degenerate images go to zero.
std::vector<MatrixZ2> induced_map(const SimplicialMap& f, const Homology& source,
                                  const Homology& target, int up_to);
std::vector<MatrixZ2> induced_map(const SimplicialMap& f, int up_to);

struct Subdivision {
  std::shared_ptr<const SimplicialComplex> complex;
  /// Subdivision vertex -> the simplex of the original complex it stands for.
  /// Vertices are numbered by dimension, then by position within it.
  std::vector<Simplex> carrier;
  /// Offsets of each dimension's block in the vertex numbering.
  std::vector<std::size_t> offset;
};

Subdivision barycentric_subdivision(const SimplicialComplex& complex);

/// The chain map sending each simplex to the sum of its full flags.
ChainMapFn subdivision_chain_map(const SimplicialComplex& complex, const Subdivision& sd);

/// Sends each subdivision vertex (a simplex) to the lexicographically
/// smallest maximal clique containing it.
SimplicialMap carrier_map_to_nerve(const Subdivision& sd, const CliqueList& cliques,
                                   std::shared_ptr<const SimplicialComplex> nerve);

enum class TowerDirection { Direct, Inverse };

/// Complexes with connecting maps. Direct: maps[i] goes from stage i to
/// stage i+1. Inverse: maps[i] goes from stage i+1 to stage i.
struct HomologyTower {
  TowerDirection direction = TowerDirection::Direct;
  std::vector<std::shared_ptr<const SimplicialComplex>> stages;
  std::vector<SimplicialMap> maps;
  int up_to = 1;
};

struct Plateau {
  int rank = 0;
  std::size_t i0 = 0, j0 = 0;
  std::size_t length = 0;  ///< stages j0..last
};

struct TowerReport {
  TowerDirection direction = TowerDirection::Direct;
  std::vector<int> dims;
  std::vector<std::vector<int>> stage_betti;  ///< [stage][dim]
  /// rank_table[dim][i][j] for i <= j: rank of the composite between stages
  /// i and j (-1 below the diagonal).
  std::vector<std::vector<std::vector<int>>> rank_table;
  std::vector<std::optional<Plateau>> plateau;  ///< per dim

  std::size_t stage_count() const { return stage_betti.size(); }
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kMinPlateauLength = 3;

/// Smallest (i0, j0), ordered lexicographically, such that every composite
/// rank r(i, j) with i0 <= i < j and j >= j0 equals one value and the window
/// j0..last has at least min_length stages. Diagonal entries are ignored.
std::optional<Plateau> find_plateau(const std::vector<std::vector<int>>& table,
                                    std::size_t min_length = kMinPlateauLength);

/// Rank table from per-step matrices: steps[d][i] is the dim-d matrix of the
/// i-th connecting map (oriented as in HomologyTower).
TowerReport tower_ranks_from_matrices(TowerDirection direction,
                                      const std::vector<std::vector<int>>& stage_betti,
                                      const std::vector<std::vector<MatrixZ2>>& steps);

TowerReport tower_ranks(const HomologyTower& tower);

}  // namespace rsl
