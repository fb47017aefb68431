#include "rsl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "rsl/error.hpp"

namespace rsl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MetricMatrix MetricMatrix::from_entries(std::size_t n, std::vector<double> row_major) {
  if (row_major.size() != n * n) throw PreconditionError("metric entry count is not n*n");
  for (std::size_t i = 0; i < n; ++i) {
    if (row_major[i * n + i] != 0.0)
      throw PreconditionError("metric diagonal entry " + std::to_string(i) + " is not zero");
    for (std::size_t j = 0; j < n; ++j) {
      double v = row_major[i * n + j];
      if (std::isnan(v) || v < 0.0) throw PreconditionError("metric entries must be nonnegative");
      if (v != row_major[j * n + i])
        throw PreconditionError("metric is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    }
  }
  MetricMatrix m;
  m.n_ = n;
  m.d_ = std::move(row_major);
  return m;
}

bool MetricMatrix::has_infinite() const {
  return std::any_of(d_.begin(), d_.end(), [](double v) { return std::isinf(v); });
}

double MetricMatrix::max_finite() const {
  double best = 0.0;
  for (double v : d_)
    if (std::isfinite(v)) best = std::max(best, v);
  return best;
}

std::optional<std::array<std::size_t, 3>> MetricMatrix::triangle_violation(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tol) return {{i, j, k}};
  return std::nullopt;
}

MetricMatrix MetricMatrix::restrict_to(std::span<const Index> ids) const {
  MetricMatrix out(ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a) {
    if (ids[a] < 0 || static_cast<std::size_t>(ids[a]) >= n_)
      throw PreconditionError("restriction index out of range");
    for (std::size_t b = 0; b < ids.size(); ++b) out.d_[a * ids.size() + b] = (*this)(ids[a], ids[b]);
  }
  return out;
}

MetricMatrix MetricMatrix::prefix(std::size_t n) const {
  if (n > n_) throw PreconditionError("metric prefix longer than metric");
  std::vector<Index> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<Index>(i);
  return restrict_to(ids);
}

MetricMatrix euclidean_metric(const PointCloud& cloud) {
  if (cloud.empty()) throw PreconditionError("euclidean_metric needs a nonempty cloud");
  const std::size_t n = cloud.size();
  MetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, distance(cloud[i], cloud[j]));
  return m;
}

MetricMatrix epsilon_path_metric(const PointCloud& cloud, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const std::size_t n = cloud.size();
  MetricMatrix euclid = n ? euclidean_metric(cloud) : MetricMatrix();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (euclid(i, j) < eps) {
        adj[i].emplace_back(j, euclid(i, j));
        adj[j].emplace_back(i, euclid(i, j));
      }

  MetricMatrix out(n);
  std::vector<double> dist(n);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (auto [v, w] : adj[u])
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pq.emplace(dist[v], v);
        }
    }
    for (std::size_t t = s + 1; t < n; ++t) {
      double v = dist[t];
      // Rounding along collinear paths can undercut the straight segment.
      if (euclid(s, t) < eps)
        v = euclid(s, t);
      else if (std::isfinite(v))
        v = std::max(v, euclid(s, t));
      out.set(s, t, v);
    }
  }
  return out;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw PreconditionError("hausdorff_distance needs nonempty sets");
  if (a.dim() != b.dim()) throw PreconditionError("hausdorff_distance dimension mismatch");
  auto directed = [](const PointCloud& x, const PointCloud& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double best = kInf;
      for (std::size_t j = 0; j < y.size() && best > worst; ++j)
        best = std::min(best, squared_distance(x[i], y[j]));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace rsl
