#include "rsl/homology.hpp"

#include <algorithm>
#include <string>

#include "rsl/error.hpp"
#include "rsl/parallel.hpp"

namespace rsl {

// --------------------------------------------------------------------------
// MatrixZ2

MatrixZ2 MatrixZ2::identity(std::size_t n) {
  MatrixZ2 m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

MatrixZ2 MatrixZ2::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  MatrixZ2 m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw PreconditionError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j] & 1);
  }
  return m;
}

std::size_t MatrixZ2::rank() const {
  std::vector<std::uint8_t> a = a_;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < c_ && rank < r_; ++col) {
    std::size_t piv = rank;
    while (piv < r_ && !a[piv * c_ + col]) ++piv;
    if (piv == r_) continue;
    for (std::size_t j = 0; j < c_; ++j) std::swap(a[piv * c_ + j], a[rank * c_ + j]);
    for (std::size_t i = 0; i < r_; ++i)
      if (i != rank && a[i * c_ + col])
        for (std::size_t j = 0; j < c_; ++j) a[i * c_ + j] ^= a[rank * c_ + j];
    ++rank;
  }
  return rank;
}

bool MatrixZ2::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](auto v) { return v == 0; });
}

MatrixZ2 MatrixZ2::operator*(const MatrixZ2& o) const {
  if (c_ != o.r_) throw PreconditionError("matrix shapes do not compose");
  MatrixZ2 m(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k)
      if (get(i, k))
        for (std::size_t j = 0; j < o.c_; ++j) m.a_[i * o.c_ + j] ^= o.a_[k * o.c_ + j];
  return m;
}

nlohmann::json MatrixZ2::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < c_; ++j) row.push_back(get(i, j) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return {{"rows", r_}, {"cols", c_}, {"entries", std::move(rows)}};
}

// --------------------------------------------------------------------------
// Chains

Chain add_chains(const Chain& a, const Chain& b) {
  Chain out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Chain boundary(const SimplicialComplex& k, int dim, std::size_t i) {
  Chain out;
  if (dim == 0) return out;
  const Simplex& s = k.simplices(dim).at(i);
  out.reserve(s.size());
  for (std::size_t drop = 0; drop < s.size(); ++drop) {
    Simplex f = s;
    f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
    auto idx = k.index_of(f);
    if (!idx) throw InternalError("complex is not face-closed");
    out.push_back(static_cast<std::uint32_t>(*idx));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Sort and cancel repeated indices (mod 2).
Chain normalize(Chain c) {
  std::sort(c.begin(), c.end());
  Chain out;
  for (std::size_t i = 0; i < c.size();) {
    std::size_t j = i;
    while (j < c.size() && c[j] == c[i]) ++j;
    if ((j - i) & 1u) out.push_back(c[i]);
    i = j;
  }
  return out;
}

}  // namespace

// --------------------------------------------------------------------------
// Homology

Homology::Homology(std::shared_ptr<const SimplicialComplex> complex, int up_to)
    : k_(std::move(complex)), up_to_(up_to) {
  if (!k_) throw PreconditionError("homology needs a complex");
  if (up_to_ < 0) throw PreconditionError("homology dimension must be nonnegative");
  if (up_to_ > k_->cap() - 1)
    throw PreconditionError("homology up to dimension " + std::to_string(up_to_) +
                            " needs a dimension cap of at least " + std::to_string(up_to_ + 1));
  const auto& K = *k_;
  reps_.assign(up_to_ + 1, {});
  pivots_.assign(up_to_ + 1, {});
  for (int d = 0; d <= up_to_; ++d) pivots_[d].assign(K.count(d), std::nullopt);

  // paired[d][i]: simplex i of dim d is the leading term of a reduced
  // boundary from dimension d+1.
  std::vector<std::vector<char>> paired(up_to_ + 2);
  for (int d = 0; d <= up_to_ + 1; ++d) paired[d].assign(K.count(d), 0);

  for (int k = up_to_ + 1; k >= 1; --k) {
    const std::size_t cols = K.count(k);
    const bool track = k <= up_to_;
    std::vector<int> low_to_col(K.count(k - 1), -1);
    std::vector<Chain> reduced(cols), v(track ? cols : 0);
    for (std::size_t j = 0; j < cols; ++j) {
      if (paired[k][j]) continue;  // clearing: this column reduces to zero
      Chain r = boundary(K, k, j);
      Chain vj;
      if (track) vj = {static_cast<std::uint32_t>(j)};
      while (!r.empty() && low_to_col[r.back()] >= 0) {
        auto l = static_cast<std::size_t>(low_to_col[r.back()]);
        r = add_chains(r, reduced[l]);
        if (track) vj = add_chains(vj, v[l]);
      }
      if (r.empty()) {
        if (track) v[j] = std::move(vj);  // cycle; a representative unless paired
        continue;
      }
      low_to_col[r.back()] = static_cast<int>(j);
      paired[k - 1][r.back()] = 1;
      reduced[j] = std::move(r);
      if (track) v[j] = std::move(vj);
    }
    if (k - 1 <= up_to_)
      for (std::size_t i = 0; i < low_to_col.size(); ++i)
        if (low_to_col[i] >= 0) pivots_[k - 1][i] = Pivot{reduced[low_to_col[i]], -1};
    if (track)
      for (std::size_t j = 0; j < cols; ++j)
        if (!paired[k][j] && reduced[j].empty()) {
          pivots_[k][j] = Pivot{v[j], static_cast<int>(reps_[k].size())};
          reps_[k].push_back(std::move(v[j]));
        }
  }
  for (std::size_t i = 0; i < K.count(0); ++i)
    if (!paired[0][i]) {
      pivots_[0][i] = Pivot{{static_cast<std::uint32_t>(i)}, static_cast<int>(reps_[0].size())};
      reps_[0].push_back({static_cast<std::uint32_t>(i)});
    }
}

std::vector<int> Homology::betti() const {
  std::vector<int> out;
  for (int d = 0; d <= up_to_; ++d) out.push_back(rank(d));
  return out;
}

std::vector<std::uint8_t> Homology::coordinates(int dim, Chain cycle) const {
  if (dim < 0 || dim > up_to_) throw PreconditionError("dimension outside computed range");
  std::vector<std::uint8_t> coords(reps_[dim].size(), 0);
  while (!cycle.empty()) {
    const auto& piv = pivots_[dim].at(cycle.back());
    if (!piv) throw InternalError("chain is not a cycle in dimension " + std::to_string(dim));
    if (piv->rep >= 0) coords[piv->rep] ^= 1;
    cycle = add_chains(cycle, piv->chain);
  }
  return coords;
}

std::vector<int> betti(const SimplicialComplex& complex, int up_to) {
  return Homology(std::make_shared<SimplicialComplex>(complex), up_to).betti();
}

std::vector<MatrixZ2> induced_chain_map(const Homology& source, const Homology& target,
                                        const ChainMapFn& map, int up_to) {
  if (up_to > source.up_to() || up_to > target.up_to())
    throw PreconditionError("induced map requested beyond computed homology");
  std::vector<MatrixZ2> out;
  for (int d = 0; d <= up_to; ++d) {
    const auto& reps = source.representatives(d);
    MatrixZ2 m(static_cast<std::size_t>(target.rank(d)), reps.size());
    for (std::size_t c = 0; c < reps.size(); ++c) {
      Chain img;
      for (auto s : reps[c]) {
        Chain part = map(d, s);
        img.insert(img.end(), part.begin(), part.end());
      }
      auto coords = target.coordinates(d, normalize(std::move(img)));
      for (std::size_t r = 0; r < coords.size(); ++r) m.set(r, c, coords[r]);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MatrixZ2> induced_map(const SimplicialMap& f, const Homology& source,
                                  const Homology& target, int up_to) {
  if (&source.complex() != &f.source() && !(source.complex() == f.source()))
    throw PreconditionError("source homology does not belong to the map's source");
  if (&target.complex() != &f.target() && !(target.complex() == f.target()))
    throw PreconditionError("target homology does not belong to the map's target");
  const auto& src = f.source();
  const auto& dst = f.target();
  return induced_chain_map(
      source, target,
      [&](int d, std::size_t s) -> Chain {
        Simplex img = f.image(src.simplices(d)[s]);
        if (static_cast<int>(img.size()) != d + 1) return {};
        auto idx = dst.index_of(img);
        if (!idx) throw InternalError("simplicial map image is missing from the target");
        return {static_cast<std::uint32_t>(*idx)};
      },
      up_to);
}

std::vector<MatrixZ2> induced_map(const SimplicialMap& f, int up_to) {
  Homology s(f.source_ptr(), up_to), t(f.target_ptr(), up_to);
  return induced_map(f, s, t, up_to);
}

// --------------------------------------------------------------------------
// Subdivision and carrier map

Subdivision barycentric_subdivision(const SimplicialComplex& K) {
  Subdivision sd;
  const int cap = K.cap();
  sd.offset.assign(cap + 2, 0);
  for (int d = 0; d <= cap; ++d) sd.offset[d + 1] = sd.offset[d] + K.count(d);
  for (int d = 0; d <= cap; ++d)
    for (const auto& s : K.simplices(d)) sd.carrier.push_back(s);

  auto vertex_id = [&](const Simplex& s) {
    auto idx = K.index_of(s);
    if (!idx) throw InternalError("face missing while subdividing");
    return static_cast<Index>(sd.offset[s.size() - 1] + *idx);
  };

  // flags[id]: every chain of faces ending at the simplex with vertex id.
  std::vector<std::vector<Simplex>> layers(cap + 1);
  std::vector<std::vector<Simplex>> flags(sd.carrier.size());
  for (int d = 0; d <= cap; ++d)
    for (const auto& s : K.simplices(d)) {
      Index me = vertex_id(s);
      std::vector<Simplex> mine{{me}};
      const std::size_t n = s.size();
      for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        Simplex face;
        for (std::size_t b = 0; b < n; ++b)
          if (mask & (1u << b)) face.push_back(s[b]);
        for (const auto& fl : flags[vertex_id(face)]) {
          Simplex ext = fl;
          ext.push_back(me);
          mine.push_back(std::move(ext));
        }
      }
      for (const auto& fl : mine)
        if (fl.size() >= 2) layers[fl.size() - 1].push_back(fl);
      flags[me] = std::move(mine);
    }
  for (auto& l : layers) std::sort(l.begin(), l.end());
  sd.complex = std::make_shared<SimplicialComplex>(
      SimplicialComplex::from_sorted_layers(sd.carrier.size(), cap, std::move(layers)));
  return sd;
}

ChainMapFn subdivision_chain_map(const SimplicialComplex& K, const Subdivision& sd) {
  return [&K, &sd](int d, std::size_t i) -> Chain {
    const Simplex& top = K.simplices(d).at(i);
    Chain out;
    // Full flags correspond to orders in which vertices are removed.
    Simplex order = top;
    do {
      Simplex flag;
      Simplex face = top;
      for (int t = d; t >= 0; --t) {
        flag.push_back(static_cast<Index>(sd.offset[t] + *K.index_of(face)));
        if (t > 0) face.erase(std::find(face.begin(), face.end(), order[static_cast<std::size_t>(d - t)]));
      }
      std::sort(flag.begin(), flag.end());
      auto idx = sd.complex->index_of(flag);
      if (!idx) throw InternalError("flag missing from the subdivision");
      out.push_back(static_cast<std::uint32_t>(*idx));
    } while (std::next_permutation(order.begin(), order.end()));
    return normalize(std::move(out));
  };
}

SimplicialMap carrier_map_to_nerve(const Subdivision& sd, const CliqueList& cliques,
                                   std::shared_ptr<const SimplicialComplex> nerve) {
  std::vector<std::vector<std::size_t>> by_vertex(cliques.n);
  for (std::size_t c = 0; c < cliques.cliques.size(); ++c)
    for (Index v : cliques.cliques[c]) by_vertex.at(static_cast<std::size_t>(v)).push_back(c);
  std::vector<Index> map(sd.carrier.size());
  for (std::size_t id = 0; id < sd.carrier.size(); ++id) {
    const Simplex& s = sd.carrier[id];
    bool found = false;
    for (std::size_t c : by_vertex.at(static_cast<std::size_t>(s.front()))) {
      const auto& cl = cliques.cliques[c];
      if (std::includes(cl.begin(), cl.end(), s.begin(), s.end())) {
        map[id] = static_cast<Index>(c);
        found = true;
        break;
      }
    }
    if (!found) throw PreconditionError("a simplex lies in no maximal clique");
  }
  if (auto bad = SimplicialMap::first_violation(*sd.complex, *nerve, map))
    throw PreconditionError("carrier map is not simplicial into the nerve");
  return SimplicialMap(sd.complex, std::move(nerve), std::move(map));
}

// --------------------------------------------------------------------------
// Towers

std::optional<Plateau> find_plateau(const std::vector<std::vector<int>>& table,
                                    std::size_t min_length) {
  const std::size_t k = table.size();
  if (k < 2 || k < min_length) return std::nullopt;
  for (std::size_t i0 = 0; i0 + 1 < k; ++i0)
    for (std::size_t j0 = i0; j0 + min_length <= k; ++j0) {
      const int r = table[i0][std::max(i0 + 1, j0)];
      bool ok = true;
      for (std::size_t i = i0; i + 1 < k && ok; ++i)
        for (std::size_t j = std::max(i + 1, j0); j < k && ok; ++j) ok = table[i][j] == r;
      if (ok) return Plateau{r, i0, j0, k - j0};
    }
  return std::nullopt;
}

TowerReport tower_ranks_from_matrices(TowerDirection direction,
                                      const std::vector<std::vector<int>>& stage_betti,
                                      const std::vector<std::vector<MatrixZ2>>& steps) {
  const std::size_t k = stage_betti.size();
  if (k < 2) throw PreconditionError("a tower needs at least two stages");
  TowerReport rep;
  rep.direction = direction;
  rep.stage_betti = stage_betti;
  const std::size_t dims = steps.size();
  for (std::size_t d = 0; d < dims; ++d) {
    if (steps[d].size() != k - 1) throw PreconditionError("tower needs one map per step");
    rep.dims.push_back(static_cast<int>(d));
    std::vector<std::vector<int>> table(k, std::vector<int>(k, -1));
    for (std::size_t i = 0; i < k; ++i) {
      MatrixZ2 comp = MatrixZ2::identity(static_cast<std::size_t>(stage_betti[i].at(d)));
      table[i][i] = static_cast<int>(comp.rank());
      for (std::size_t j = i; j + 1 < k; ++j) {
        comp = direction == TowerDirection::Direct ? steps[d][j] * comp : comp * steps[d][j];
        table[i][j + 1] = static_cast<int>(comp.rank());
      }
    }
    rep.plateau.push_back(find_plateau(table));
    rep.rank_table.push_back(std::move(table));
  }
  return rep;
}

TowerReport tower_ranks(const HomologyTower& tower) {
  const std::size_t k = tower.stages.size();
  if (k < 2) throw PreconditionError("a tower needs at least two stages");
  if (tower.maps.size() != k - 1) throw PreconditionError("a tower needs one map per step");
  std::vector<std::unique_ptr<Homology>> hom(k);
  parallel_for(k, [&](std::size_t i) { hom[i] = std::make_unique<Homology>(tower.stages[i], tower.up_to); });
  std::vector<std::vector<int>> stage_betti;
  for (const auto& h : hom) stage_betti.push_back(h->betti());
  std::vector<std::vector<MatrixZ2>> per_step(k - 1);
  parallel_for(k - 1, [&](std::size_t i) {
    const bool direct = tower.direction == TowerDirection::Direct;
    const Homology& src = direct ? *hom[i] : *hom[i + 1];
    const Homology& dst = direct ? *hom[i + 1] : *hom[i];
    per_step[i] = induced_map(tower.maps[i], src, dst, tower.up_to);
  });
  std::vector<std::vector<MatrixZ2>> steps(tower.up_to + 1);
  for (int d = 0; d <= tower.up_to; ++d)
    for (std::size_t i = 0; i + 1 < k; ++i) steps[d].push_back(per_step[i][d]);
  return tower_ranks_from_matrices(tower.direction, stage_betti, steps);
}

nlohmann::json TowerReport::to_json() const {
  nlohmann::json stages = nlohmann::json::array();
  for (std::size_t i = 0; i < stage_betti.size(); ++i)
    stages.push_back({{"index", i}, {"betti", stage_betti[i]}});
  nlohmann::json table = nlohmann::json::array();
  for (const auto& t : rank_table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t) {
      nlohmann::json r = nlohmann::json::array();
      for (int v : row) r.push_back(v < 0 ? nlohmann::json(nullptr) : nlohmann::json(v));
      rows.push_back(std::move(r));
    }
    table.push_back(std::move(rows));
  }
  nlohmann::json plateaus = nlohmann::json::array();
  for (std::size_t d = 0; d < plateau.size(); ++d) {
    if (!plateau[d]) {
      plateaus.push_back(nullptr);
      continue;
    }
    const auto& p = *plateau[d];
    plateaus.push_back({{"dim", dims[d]}, {"rank", p.rank}, {"i0", p.i0}, {"j0", p.j0}, {"length", p.length}});
  }
  const std::size_t k = stage_betti.size();
  return {{"direction", direction == TowerDirection::Direct ? "direct" : "inverse"},
          {"dims", dims},
          {"stages", std::move(stages)},
          {"rank_table", std::move(table)},
          {"plateau", std::move(plateaus)},
          {"window", {{"first", 0}, {"last", k ? k - 1 : 0}, {"min_plateau_length", kMinPlateauLength}}}};
}

}  // namespace rsl
