#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsl/point_cloud.hpp"

namespace rsl {

/// Sorted ascending vertex tuple.
using Simplex = std::vector<Index>;

/// Face-closed simplicial complex on vertices 0..n-1, stored per dimension
/// up to a cap D. Every vertex is a 0-simplex. Within a dimension simplices
/// are kept in lexicographic order, which fixes the chain bases.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(std::size_t n_vertices, int cap);

  /// Closure of the given simplices (unsorted input accepted; simplices above
  /// the cap are truncated to their cap-dimensional faces).
  static SimplicialComplex from_simplices(std::size_t n_vertices, int cap,
                                          const std::vector<Simplex>& simplices);
  /// Takes per-dimension lists that are already sorted and face-closed.
  static SimplicialComplex from_sorted_layers(std::size_t n_vertices, int cap,
                                              std::vector<std::vector<Simplex>> layers);

  std::size_t vertex_count() const { return n_; }
  int cap() const { return cap_; }
  /// Highest dimension with at least one simplex (-1 when empty).
  int dim() const;
  const std::vector<Simplex>& simplices(int k) const;
  std::size_t count(int k) const { return k < 0 || k > cap_ ? 0 : layers_[k].size(); }
  std::size_t size() const;

  std::optional<std::size_t> index_of(const Simplex& s) const;
  bool contains(const Simplex& s) const { return index_of(s).has_value(); }
  /// Simplices not a proper face of another stored simplex.
  std::vector<Simplex> maximal_simplices() const;
  /// First stored simplex with a missing codimension-one face, if any.
  std::optional<Simplex> closure_violation() const;

  nlohmann::json to_json() const;
  static SimplicialComplex from_json(const nlohmann::json& j);

  bool operator==(const SimplicialComplex&) const = default;

 private:
  std::size_t n_ = 0;
  int cap_ = 0;
  std::vector<std::vector<Simplex>> layers_;
};

/// Sorted, deduplicated image of a simplex under a vertex assignment.
Simplex image_of(const Simplex& s, const std::vector<Index>& vertex_map);

/// Vertex map between complexes that sends every source simplex to a target
/// simplex. Simpliciality is verified on construction.
class SimplicialMap {
 public:
  SimplicialMap(std::shared_ptr<const SimplicialComplex> source,
                std::shared_ptr<const SimplicialComplex> target, std::vector<Index> vertex_map);

  /// First source simplex whose image is missing from the target, if any.
  static std::optional<Simplex> first_violation(const SimplicialComplex& source,
                                                const SimplicialComplex& target,
                                                const std::vector<Index>& vertex_map);

  const SimplicialComplex& source() const { return *src_; }
  const SimplicialComplex& target() const { return *dst_; }
  std::shared_ptr<const SimplicialComplex> source_ptr() const { return src_; }
  std::shared_ptr<const SimplicialComplex> target_ptr() const { return dst_; }
  const std::vector<Index>& vertex_map() const { return map_; }
  Simplex image(const Simplex& s) const { return image_of(s, map_); }

  /// then(g) = g o this.
  SimplicialMap then(const SimplicialMap& g) const;

 private:
  std::shared_ptr<const SimplicialComplex> src_, dst_;
  std::vector<Index> map_;
};

}  // namespace rsl
