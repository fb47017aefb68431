#include "rsl/complex.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "rsl/error.hpp"

namespace rsl {

namespace {

std::string describe(const Simplex& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

void check_cap(int cap) {
  if (cap < 0) throw PreconditionError("dimension cap must be nonnegative");
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::size_t n_vertices, int cap) : n_(n_vertices), cap_(cap) {
  check_cap(cap);
  layers_.resize(static_cast<std::size_t>(cap) + 1);
  layers_[0].reserve(n_);
  for (std::size_t v = 0; v < n_; ++v) layers_[0].push_back({static_cast<Index>(v)});
}

SimplicialComplex SimplicialComplex::from_simplices(std::size_t n_vertices, int cap,
                                                    const std::vector<Simplex>& simplices) {
  SimplicialComplex k(n_vertices, cap);
  std::vector<std::set<Simplex>> acc(static_cast<std::size_t>(cap) + 1);
  for (Simplex s : simplices) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw PreconditionError("simplex " + describe(s) + " repeats a vertex");
    if (s.empty()) continue;
    if (s.front() < 0 || static_cast<std::size_t>(s.back()) >= n_vertices)
      throw PreconditionError("simplex " + describe(s) + " has a vertex out of range");
    for (std::size_t size = 2; size <= std::min(s.size(), static_cast<std::size_t>(cap) + 1); ++size) {
      std::vector<bool> pick(s.size(), false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
      do {
        Simplex f;
        for (std::size_t i = 0; i < s.size(); ++i)
          if (pick[i]) f.push_back(s[i]);
        acc[size - 1].insert(std::move(f));
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  for (int d = 1; d <= cap; ++d) k.layers_[d].assign(acc[d].begin(), acc[d].end());
  return k;
}

SimplicialComplex SimplicialComplex::from_sorted_layers(std::size_t n_vertices, int cap,
                                                        std::vector<std::vector<Simplex>> layers) {
  SimplicialComplex k(n_vertices, cap);
  if (layers.size() > static_cast<std::size_t>(cap) + 1)
    throw PreconditionError("more layers than the dimension cap allows");
  for (std::size_t d = 1; d < layers.size(); ++d) k.layers_[d] = std::move(layers[d]);
  return k;
}

int SimplicialComplex::dim() const {
  for (int d = cap_; d >= 0; --d)
    if (!layers_[d].empty()) return d;
  return -1;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> empty;
  if (k < 0 || k > cap_) return empty;
  return layers_[k];
}

std::size_t SimplicialComplex::size() const {
  std::size_t s = 0;
  for (const auto& l : layers_) s += l.size();
  return s;
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
  if (s.empty() || static_cast<int>(s.size()) - 1 > cap_) return std::nullopt;
  const auto& layer = layers_[s.size() - 1];
  auto it = std::lower_bound(layer.begin(), layer.end(), s);
  if (it == layer.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - layer.begin());
}

std::vector<Simplex> SimplicialComplex::maximal_simplices() const {
  std::vector<Simplex> out;
  for (int d = 0; d <= cap_; ++d) {
    std::set<Simplex> covered;
    if (d < cap_)
      for (const auto& t : layers_[d + 1])
        for (std::size_t i = 0; i < t.size(); ++i) {
          Simplex f = t;
          f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
          covered.insert(std::move(f));
        }
    for (const auto& s : layers_[d])
      if (!covered.count(s)) out.push_back(s);
  }
  return out;
}

std::optional<Simplex> SimplicialComplex::closure_violation() const {
  for (int d = 1; d <= cap_; ++d)
    for (const auto& s : layers_[d])
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        if (!contains(f)) return s;
      }
  return std::nullopt;
}

nlohmann::json SimplicialComplex::to_json() const {
  nlohmann::json simplices = nlohmann::json::array();
  for (const auto& layer : layers_)
    for (const auto& s : layer) simplices.push_back(s);
  return {{"n", n_}, {"cap", cap_}, {"simplices", std::move(simplices)}};
}

SimplicialComplex SimplicialComplex::from_json(const nlohmann::json& j) {
  try {
    auto n = j.at("n").get<std::size_t>();
    auto cap = j.at("cap").get<int>();
    auto simplices = j.at("simplices").get<std::vector<Simplex>>();
    return from_simplices(n, cap, simplices);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("complex record: ") + e.what());
  }
}

Simplex image_of(const Simplex& s, const std::vector<Index>& vertex_map) {
  Simplex out;
  out.reserve(s.size());
  for (Index v : s) out.push_back(vertex_map.at(static_cast<std::size_t>(v)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SimplicialMap::SimplicialMap(std::shared_ptr<const SimplicialComplex> source,
                             std::shared_ptr<const SimplicialComplex> target,
                             std::vector<Index> vertex_map)
    : src_(std::move(source)), dst_(std::move(target)), map_(std::move(vertex_map)) {
  if (!src_ || !dst_) throw PreconditionError("simplicial map needs both complexes");
  if (map_.size() != src_->vertex_count())
    throw PreconditionError("vertex map length differs from source vertex count");
  for (Index v : map_)
    if (v < 0 || static_cast<std::size_t>(v) >= dst_->vertex_count())
      throw PreconditionError("vertex map sends a vertex outside the target");
  if (auto bad = first_violation(*src_, *dst_, map_))
    throw PreconditionError("vertex map is not simplicial: image of " + describe(*bad) +
                            " is not a target simplex");
}

std::optional<Simplex> SimplicialMap::first_violation(const SimplicialComplex& source,
                                                      const SimplicialComplex& target,
                                                      const std::vector<Index>& vertex_map) {
  for (int d = 1; d <= source.cap(); ++d)
    for (const auto& s : source.simplices(d)) {
      Simplex img = image_of(s, vertex_map);
      if (!target.contains(img)) return s;
    }
  return std::nullopt;
}

SimplicialMap SimplicialMap::then(const SimplicialMap& g) const {
  if (g.src_.get() != dst_.get() && !(*g.src_ == *dst_))
    throw PreconditionError("maps are not composable");
  std::vector<Index> composed(map_.size());
  for (std::size_t v = 0; v < map_.size(); ++v) composed[v] = g.map_[static_cast<std::size_t>(map_[v])];
  return SimplicialMap(src_, g.dst_, std::move(composed));
}

}  // namespace rsl
