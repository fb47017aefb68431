#include "rsl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "exact_lp.hpp"
#include "rsl/error.hpp"

namespace rsl {

using detail::Rational;

void OracleConfig::validate() const {
  if (rips_max_points == 0 || homology_max_simplices == 0 || hull_resolution <= 0)
    throw PreconditionError("oracle budgets must be positive");
}

SimplicialComplex brute_rips(const MetricMatrix& metric, double beta, int cap, const OracleConfig& config) {
  config.validate();
  if (cap < 0) throw PreconditionError("cap must be nonnegative");
  const std::size_t n = metric.size();
  if (n > config.rips_max_points)
    throw PreconditionError("brute_rips refuses " + std::to_string(n) + " points (limit " +
                            std::to_string(config.rips_max_points) + ")");
  std::vector<std::vector<Simplex>> layers(static_cast<std::size_t>(cap) + 1);
  const std::uint32_t total = n == 0 ? 1u : (1u << n);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    const int k = std::popcount(mask);
    if (k > cap + 1) continue;
    Simplex s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) s.push_back(static_cast<Index>(i));
    bool ok = true;
    for (std::size_t a = 0; a < s.size() && ok; ++a)
      for (std::size_t b = a + 1; b < s.size() && ok; ++b) ok = metric(s[a], s[b]) < beta;
    if (ok) layers[k - 1].push_back(std::move(s));
  }
  for (auto& layer : layers) std::sort(layer.begin(), layer.end());
  return SimplicialComplex::from_sorted_layers(n, cap, std::move(layers));
}

namespace {

// Rank over Z/2 of a dense 0/1 matrix given as rows of bit words. Pivots are
// taken from the highest column down.
std::size_t dense_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = cols; c-- > 0;) {
    const std::size_t w = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t p = rank;
    while (p < rows.size() && !(rows[p][w] & bit)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && (rows[r][w] & bit))
        for (std::size_t k = 0; k < rows[r].size(); ++k) rows[r][k] ^= rows[rank][k];
    ++rank;
  }
  return rank;
}

// Rank of the boundary from dimension k to k-1; one row per k-simplex.
std::size_t boundary_rank(const SimplicialComplex& K, int k) {
  if (k <= 0 || k > K.cap() || K.count(k) == 0) return 0;
  const auto& faces = K.simplices(k - 1);
  const std::size_t cols = faces.size();
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& s : K.simplices(k)) {
    std::vector<std::uint64_t> row(words, 0);
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != drop) f.push_back(s[i]);
      // Linear search keeps this independent of the complex's own index.
      auto it = std::find(faces.begin(), faces.end(), f);
      if (it == faces.end()) throw InternalError("complex is not closed under faces");
      const auto c = static_cast<std::size_t>(it - faces.begin());
      row[c / 64] ^= std::uint64_t{1} << (c % 64);
    }
    rows.push_back(std::move(row));
  }
  return dense_rank(std::move(rows), cols);
}

}  // namespace

int brute_homology(const SimplicialComplex& complex, int m, const OracleConfig& config) {
  config.validate();
  if (m < 0) throw PreconditionError("homology dimension must be nonnegative");
  if (complex.size() > config.homology_max_simplices)
    throw PreconditionError("brute_homology refuses " + std::to_string(complex.size()) + " simplices (limit " +
                            std::to_string(config.homology_max_simplices) + ")");
  if (m > complex.cap()) return 0;
  const auto cycles = complex.count(m) - boundary_rank(complex, m);
  return static_cast<int>(cycles - boundary_rank(complex, m + 1));
}

namespace {

using QVec = std::vector<Rational>;

// Solves sum_i l_i q_i = p, sum_i l_i = 1 for affinely independent q_i by
// exact elimination; true when the unique solution is nonnegative.
// Returns false also for dependent or inconsistent systems.
bool in_simplex(const std::vector<const QVec*>& q, const QVec& p) {
  const std::size_t k = q.size(), d = p.size();
  const std::size_t rows = d + 1;
  std::vector<QVec> a(rows, QVec(k + 1));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t r = 0; r < d; ++r) a[r][j] = (*q[j])[r];
    a[d][j] = 1;
  }
  for (std::size_t r = 0; r < d; ++r) a[r][k] = p[r];
  a[d][k] = 1;
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p_row = row;
    while (p_row < rows && a[p_row][c] == 0) ++p_row;
    if (p_row == rows) return false;  // dependent columns
    std::swap(a[p_row], a[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[row][c];
      for (std::size_t cc = c; cc <= k; ++cc) a[r][cc] -= f * a[row][cc];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r)
    if (a[r][k] != 0) return false;  // inconsistent
  for (std::size_t r = 0; r < k; ++r)
    if (a[r][k] / a[r][r] < 0) return false;
  return true;
}

// Caratheodory: p is in conv(P) iff it lies in a simplex of at most d+1
// affinely independent points of P.
bool in_hull(const std::vector<QVec>& pts, const QVec& p) {
  const std::size_t n = pts.size(), d = p.size();
  const std::size_t kmax = std::min(n, d + 1);
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<const QVec*> q;
      for (auto i : idx) q.push_back(&pts[i]);
      if (in_simplex(q, p)) return true;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

}  // namespace

std::optional<Point> brute_hull_witness(const ConvexCellSystem& cells, std::span<const std::size_t> ids,
                                        int resolution) {
  if (resolution <= 0) throw PreconditionError("resolution must be positive");
  const std::size_t d = cells.coords.dim();
  if (d > 3) throw PreconditionError("grid hull oracle needs ambient dimension <= 3");
  if (ids.empty()) return std::nullopt;
  std::vector<double> lo(d, -INFINITY), hi(d, INFINITY);
  std::vector<std::vector<QVec>> hulls;
  for (auto id : ids) {
    if (id >= cells.size()) throw PreconditionError("cell id out of range");
    std::vector<QVec> pts;
    std::vector<double> mn(d, INFINITY), mx(d, -INFINITY);
    for (Index v : cells.cells.cliques[id]) {
      auto p = cells.coords[v];
      QVec q;
      for (std::size_t c = 0; c < d; ++c) {
        q.emplace_back(p[c]);
        mn[c] = std::min(mn[c], p[c]);
        mx[c] = std::max(mx[c], p[c]);
      }
      pts.push_back(std::move(q));
    }
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::max(lo[c], mn[c]);
      hi[c] = std::min(hi[c], mx[c]);
    }
    hulls.push_back(std::move(pts));
  }
  for (std::size_t c = 0; c < d; ++c)
    if (lo[c] > hi[c]) return std::nullopt;

  std::vector<int> steps(d);
  for (std::size_t c = 0; c < d; ++c) steps[c] = lo[c] == hi[c] ? 0 : resolution;
  std::vector<int> at(d, 0);
  while (true) {
    Point x(d);
    QVec q(d);
    for (std::size_t c = 0; c < d; ++c) {
      x[c] = steps[c] == 0 ? lo[c] : (at[c] == steps[c] ? hi[c] : lo[c] + (hi[c] - lo[c]) * at[c] / steps[c]);
      q[c] = Rational(x[c]);
    }
    bool all = true;
    for (const auto& h : hulls)
      if (!in_hull(h, q)) {
        all = false;
        break;
      }
    if (all) return x;
    std::size_t c = 0;
    while (c < d && at[c] == steps[c]) at[c++] = 0;
    if (c == d) break;
    ++at[c];
  }
  return std::nullopt;
}

bool brute_hull_intersection(const ConvexCellSystem& cells, std::span<const std::size_t> ids, int resolution) {
  return brute_hull_witness(cells, ids, resolution).has_value();
}

}  // namespace rsl
