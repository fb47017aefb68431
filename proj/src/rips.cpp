#include "rsl/rips.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "rsl/error.hpp"

namespace rsl {

namespace {

bool joined(double d, double beta) { return d < beta; }  // inf < beta is false

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  std::size_t and_count(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

void check_beta(double beta) {
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
}

}  // namespace

SimplicialComplex build_rips(const MetricMatrix& metric, double beta, int cap) {
  check_beta(beta);
  if (cap < 1) throw PreconditionError("dimension cap must be at least 1");
  const std::size_t n = metric.size();
  // Higher neighbours of each vertex, ascending.
  std::vector<std::vector<Index>> up(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (joined(metric(i, j), beta)) up[i].push_back(static_cast<Index>(j));

  std::vector<std::vector<Simplex>> layers(static_cast<std::size_t>(cap) + 1);
  Simplex current;
  // Depth-first extension in lexicographic order; each layer receives its
  // tuples already sorted.
  auto extend = [&](auto&& self, const std::vector<Index>& candidates) -> void {
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      Index v = candidates[a];
      current.push_back(v);
      if (current.size() >= 2) layers[current.size() - 1].push_back(current);
      if (static_cast<int>(current.size()) <= cap) {
        std::vector<Index> next;
        for (std::size_t b = a + 1; b < candidates.size(); ++b)
          if (joined(metric(v, candidates[b]), beta)) next.push_back(candidates[b]);
        if (!next.empty()) self(self, next);
      }
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    current.assign(1, static_cast<Index>(v));
    extend(extend, up[v]);
  }
  return SimplicialComplex::from_sorted_layers(n, cap, std::move(layers));
}

nlohmann::json CliqueList::to_json() const { return {{"n", n}, {"cliques", cliques}}; }

CliqueList CliqueList::from_json(const nlohmann::json& j) {
  try {
    CliqueList c;
    c.n = j.at("n").get<std::size_t>();
    c.cliques = j.at("cliques").get<std::vector<Simplex>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("clique record: ") + e.what());
  }
}

CliqueList maximal_cliques(const MetricMatrix& metric, double beta, std::size_t budget) {
  check_beta(beta);
  const std::size_t n = metric.size();
  std::vector<Bitset> adj(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (joined(metric(i, j), beta)) {
        adj[i].set(j);
        adj[j].set(i);
      }

  CliqueList out;
  out.n = n;
  Simplex r;
  // Bron-Kerbosch with Tomita pivoting.
  auto bk = [&](auto&& self, Bitset p, Bitset x) -> void {
    if (p.none() && x.none()) {
      if (out.cliques.size() >= budget)
        throw ResourceError("maximal clique budget of " + std::to_string(budget) +
                            " exceeded (at least " + std::to_string(out.cliques.size() + 1) +
                            " cliques); lower beta or raise the budget");
      Simplex c = r;
      std::sort(c.begin(), c.end());
      out.cliques.push_back(std::move(c));
      return;
    }
    std::size_t pivot = 0, best = 0;
    bool have = false;
    auto consider = [&](std::size_t u) {
      std::size_t c = p.and_count(adj[u]);
      if (!have || c > best) {
        pivot = u;
        best = c;
        have = true;
      }
    };
    p.for_each(consider);
    x.for_each(consider);
    std::vector<std::size_t> todo;
    p.for_each([&](std::size_t v) {
      if (!adj[pivot].test(v)) todo.push_back(v);
    });
    for (std::size_t v : todo) {
      r.push_back(static_cast<Index>(v));
      self(self, p & adj[v], x & adj[v]);
      r.pop_back();
      p.reset(v);
      x.set(v);
    }
  };
  Bitset all(n);
  for (std::size_t i = 0; i < n; ++i) all.set(i);
  bk(bk, all, Bitset(n));
  std::sort(out.cliques.begin(), out.cliques.end());
  return out;
}

SimplicialMap inclusion_map(std::shared_ptr<const SimplicialComplex> src, double gamma,
                            std::shared_ptr<const SimplicialComplex> dst, double beta,
                            std::vector<Index> embedding) {
  if (gamma > beta)
    throw PreconditionError("scale ordering violated: source scale " + std::to_string(gamma) +
                            " exceeds target scale " + std::to_string(beta));
  if (embedding.empty()) {
    if (src->vertex_count() > dst->vertex_count())
      throw PreconditionError("source sample is larger than target sample");
    embedding.resize(src->vertex_count());
    for (std::size_t v = 0; v < embedding.size(); ++v) embedding[v] = static_cast<Index>(v);
  }
  std::vector<Index> sorted = embedding;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("sample embedding is not injective");
  return SimplicialMap(std::move(src), std::move(dst), std::move(embedding));
}

}  // namespace rsl
