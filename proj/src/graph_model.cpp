// Metric graphs embedded as straight segments in R^N.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "model_impl.hpp"
#include "rsl/error.hpp"

namespace rsl::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closest distance between segments [p0,p1] and [q0,q1] (Ericson, RTCD 5.1.9).
double segment_distance(std::span<const double> p0, std::span<const double> p1,
                        std::span<const double> q0, std::span<const double> q1) {
  const std::size_t n = p0.size();
  std::vector<double> d1(n), d2(n), r(n);
  double a = 0, e = 0, f = 0, c = 0, b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d1[i] = p1[i] - p0[i];
    d2[i] = q1[i] - q0[i];
    r[i] = p0[i] - q0[i];
    a += d1[i] * d1[i];
    e += d2[i] * d2[i];
    f += d2[i] * r[i];
    c += d1[i] * r[i];
    b += d1[i] * d2[i];
  }
  double s = 0, t = 0;
  double denom = a * e - b * b;
  s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  t = (b * s + f) / e;
  if (t < 0) {
    t = 0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1) {
    t = 1;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  double d2sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = p0[i] + s * d1[i] - q0[i] - t * d2[i];
    d2sum += v * v;
  }
  return std::sqrt(d2sum);
}

class GraphModel final : public ModelImpl {
 public:
  GraphModel(PointCloud vertices, std::vector<std::pair<Index, Index>> segments, ModelKind kind,
             nlohmann::json params)
      : v_(std::move(vertices)), seg_(std::move(segments)), kind_(kind), params_(std::move(params)) {
    if (v_.empty() || seg_.empty()) throw PreconditionError("graph needs vertices and segments");
    const auto nv = static_cast<Index>(v_.size());
    offset_.push_back(0.0);
    for (auto [a, b] : seg_) {
      if (a < 0 || b < 0 || a >= nv || b >= nv) throw PreconditionError("segment endpoint out of range");
      if (a == b) throw PreconditionError("graph segments must join distinct vertices");
      double w = distance(v_[a], v_[b]);
      if (!(w > 0.0)) throw PreconditionError("graph segment has zero length");
      len_.push_back(w);
      offset_.push_back(offset_.back() + w);
    }
    compute_vertex_distances();
    compute_tube();
  }

  ModelKind kind() const override { return kind_; }
  std::size_t dim() const override { return v_.dim(); }
  double length() const override { return offset_.back(); }
  bool closed_curve() const override { return false; }

  Point point_at(double t) const override {
    auto [e, x] = locate(t);
    return lerp(e, x);
  }

  Projection project(std::span<const double> x) const override {
    if (x.size() != dim()) throw PreconditionError("projection dimension mismatch");
    struct Hit {
      std::size_t e;
      double off, d;
    };
    std::vector<Hit> hits;
    for (std::size_t e = 0; e < seg_.size(); ++e) {
      auto a = v_[seg_[e].first], b = v_[seg_[e].second];
      double num = 0;
      for (std::size_t i = 0; i < dim(); ++i) num += (x[i] - a[i]) * (b[i] - a[i]);
      double s = std::clamp(num / (len_[e] * len_[e]), 0.0, 1.0);
      double off = s * len_[e];
      hits.push_back({e, off, distance(x, lerp(e, off))});
    }
    std::stable_sort(hits.begin(), hits.end(), [](auto& l, auto& r) { return l.d < r.d; });
    const Hit& best = hits.front();
    Point foot = lerp(best.e, best.off);
    for (std::size_t k = 1; k < hits.size(); ++k) {
      if (hits[k].d - best.d > 1e-10 * (1.0 + best.d)) break;
      if (distance(lerp(hits[k].e, hits[k].off), foot) > 1e-9)
        throw AmbiguityError("point is equidistant from two graph segments");
    }
    return {foot, offset_[best.e] + best.off, best.d};
  }

  double geodesic(double s, double t) const override {
    auto [e, x] = locate(s);
    auto [f, y] = locate(t);
    double best = kInf;
    if (e == f) best = std::fabs(x - y);
    const Index ee[2] = {seg_[e].first, seg_[e].second};
    const double ex[2] = {x, len_[e] - x};
    const Index ff[2] = {seg_[f].first, seg_[f].second};
    const double fy[2] = {y, len_[f] - y};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) best = std::min(best, ex[i] + vd(ee[i], ff[j]) + fy[j]);
    return best;
  }

  std::vector<Point> normal_basis(double t) const override {
    auto [e, x] = locate(t);
    (void)x;
    auto a = v_[seg_[e].first], b = v_[seg_[e].second];
    Point dir(dim());
    for (std::size_t i = 0; i < dim(); ++i) dir[i] = (b[i] - a[i]) / len_[e];
    return normal_complement(dir);
  }

  double tube_radius() const override { return tube_; }

  std::vector<int> betti() const override {
    int comps = components();
    int e = static_cast<int>(seg_.size()), v = static_cast<int>(v_.size());
    return {comps, e - v + comps};
  }

  double delta_max() const override { return kInf; }

  double density_radius(std::span<const double> params) const override {
    if (params.empty()) return kInf;
    const std::size_t nv = v_.size();
    std::vector<std::vector<double>> on_seg(seg_.size());
    std::vector<double> dist(nv, kInf);
    for (double p : params) {
      auto [e, x] = locate(p);
      on_seg[e].push_back(x);
      dist[seg_[e].first] = std::min(dist[seg_[e].first], x);
      dist[seg_[e].second] = std::min(dist[seg_[e].second], len_[e] - x);
    }
    // Multi-source Dijkstra on the vertices.
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t u = 0; u < nv; ++u)
      if (std::isfinite(dist[u])) pq.emplace(dist[u], static_cast<Index>(u));
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (auto [w, e] : adj_[u])
        if (d + len_[e] < dist[w]) {
          dist[w] = d + len_[e];
          pq.emplace(dist[w], w);
        }
    }
    double worst = 0.0;
    for (std::size_t e = 0; e < seg_.size(); ++e) {
      auto& cuts = on_seg[e];
      std::sort(cuts.begin(), cuts.end());
      double prev_pos = 0.0, prev_d = dist[seg_[e].first];
      auto piece = [&](double pos, double d) {
        worst = std::max(worst, (prev_d + d + (pos - prev_pos)) / 2.0);
        prev_pos = pos;
        prev_d = d;
      };
      for (double c : cuts) piece(c, 0.0);
      piece(len_[e], dist[seg_[e].second]);
    }
    return worst;
  }

  ModelConstants constants(double delta) const override {
    if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
    ModelConstants k;
    k.eta = std::numeric_limits<double>::quiet_NaN();
    k.reach = std::numeric_limits<double>::quiet_NaN();
    k.rho = girth() / 2.0;
    k.delta = delta;
    k.numeric = true;

    // Points on segments meeting at a vertex with angle theta: the path
    // through the vertex is at most 1/sin(theta/2) times the chord.
    double xi = 1.0;
    for (std::size_t u = 0; u < v_.size(); ++u)
      for (std::size_t i = 0; i < adj_[u].size(); ++i)
        for (std::size_t j = i + 1; j < adj_[u].size(); ++j) {
          double ang = angle_at(static_cast<Index>(u), adj_[u][i].first, adj_[u][j].first);
          xi = std::max(xi, ang > 0 ? 1.0 / std::sin(ang / 2.0) : kInf);
        }

    // Non-incident segments: grid bound.
    double h = kInf;
    for (double w : len_) h = std::min(h, w / 16.0);
    h = std::min(h, tube_ / 4.0);
    std::vector<std::vector<std::pair<double, Point>>> grid(seg_.size());
    for (std::size_t e = 0; e < seg_.size(); ++e) {
      auto m = static_cast<std::size_t>(std::ceil(len_[e] / h));
      for (std::size_t i = 0; i <= m; ++i) {
        double x = len_[e] * i / m;
        grid[e].emplace_back(offset_[e] + std::min(x, std::nextafter(len_[e], 0.0)), lerp(e, x));
      }
    }
    for (std::size_t e = 0; e < seg_.size(); ++e)
      for (std::size_t f = e + 1; f < seg_.size(); ++f) {
        if (incident(e, f)) continue;
        for (auto& [s, p] : grid[e])
          for (auto& [t, q] : grid[f]) {
            double chord = distance(p, q);
            if (chord >= delta + h) continue;
            double ratio = chord > h ? (geodesic(s, t) + h) / (chord - h) : kInf;
            xi = std::max(xi, ratio);
          }
      }
    k.xi = xi;
    std::ostringstream os;
    os << "graph: rho = girth/2; xi from junction angles and a segment grid of spacing " << h
       << " for non-incident segments";
    k.certification = os.str();
    return k;
  }

  nlohmann::json to_json() const override {
    if (kind_ == ModelKind::Theta) return {{"kind", "theta"}, {"params", params_}};
    std::vector<Point> verts;
    for (std::size_t i = 0; i < v_.size(); ++i) verts.push_back(v_.point(i));
    return {{"kind", "graph"}, {"params", {{"vertices", verts}, {"segments", seg_}}}};
  }

 private:
  std::pair<std::size_t, double> locate(double t) const {
    t = wrap_param(t, length());
    auto it = std::upper_bound(offset_.begin(), offset_.end(), t);
    auto e = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - offset_.begin() - 1));
    e = std::min(e, seg_.size() - 1);
    return {e, std::clamp(t - offset_[e], 0.0, len_[e])};
  }

  Point lerp(std::size_t e, double x) const {
    auto a = v_[seg_[e].first], b = v_[seg_[e].second];
    double s = x / len_[e];
    Point p(dim());
    for (std::size_t i = 0; i < dim(); ++i) p[i] = a[i] + s * (b[i] - a[i]);
    return p;
  }

  double vd(Index a, Index b) const { return vdist_[a * v_.size() + b]; }

  bool incident(std::size_t e, std::size_t f) const {
    return seg_[e].first == seg_[f].first || seg_[e].first == seg_[f].second ||
           seg_[e].second == seg_[f].first || seg_[e].second == seg_[f].second;
  }

  double angle_at(Index u, Index a, Index b) const {
    auto o = v_[u], p = v_[a], q = v_[b];
    double dot = 0, np = 0, nq = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
      dot += (p[i] - o[i]) * (q[i] - o[i]);
      np += (p[i] - o[i]) * (p[i] - o[i]);
      nq += (q[i] - o[i]) * (q[i] - o[i]);
    }
    return std::acos(std::clamp(dot / std::sqrt(np * nq), -1.0, 1.0));
  }

  void compute_vertex_distances() {
    const std::size_t nv = v_.size();
    adj_.assign(nv, {});
    for (std::size_t e = 0; e < seg_.size(); ++e) {
      adj_[seg_[e].first].emplace_back(seg_[e].second, e);
      adj_[seg_[e].second].emplace_back(seg_[e].first, e);
    }
    vdist_.assign(nv * nv, kInf);
    for (std::size_t s = 0; s < nv; ++s) vdist_[s * nv + s] = 0.0;
    for (std::size_t e = 0; e < seg_.size(); ++e) {
      auto [a, b] = seg_[e];
      vdist_[a * nv + b] = std::min(vdist_[a * nv + b], len_[e]);
      vdist_[b * nv + a] = vdist_[a * nv + b];
    }
    for (std::size_t k = 0; k < nv; ++k)
      for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nv; ++j)
          vdist_[i * nv + j] = std::min(vdist_[i * nv + j], vdist_[i * nv + k] + vdist_[k * nv + j]);
  }

  void compute_tube() {
    double m = kInf;
    for (std::size_t e = 0; e < seg_.size(); ++e)
      for (std::size_t f = e + 1; f < seg_.size(); ++f) {
        if (incident(e, f)) continue;
        m = std::min(m, segment_distance(v_[seg_[e].first], v_[seg_[e].second], v_[seg_[f].first],
                                         v_[seg_[f].second]));
      }
    if (!(m > 0.0)) throw PreconditionError("graph segments intersect away from shared vertices");
    // Incident segments overlapping along a line are also not embedded.
    for (std::size_t u = 0; u < v_.size(); ++u)
      for (std::size_t i = 0; i < adj_[u].size(); ++i)
        for (std::size_t j = i + 1; j < adj_[u].size(); ++j)
          if (angle_at(static_cast<Index>(u), adj_[u][i].first, adj_[u][j].first) < 1e-12)
            throw PreconditionError("graph segments overlap at a shared vertex");
    tube_ = 0.5 * m;
  }

  int components() const {
    const std::size_t nv = v_.size();
    int comps = 0;
    for (std::size_t s = 0; s < nv; ++s) {
      bool first = true;
      for (std::size_t t = 0; t < s; ++t)
        if (std::isfinite(vd(static_cast<Index>(s), static_cast<Index>(t)))) first = false;
      if (first) ++comps;
    }
    return comps;
  }

  // Shortest cycle: for each segment, the shortest path between its
  // endpoints that avoids it.
  double girth() const {
    const std::size_t nv = v_.size();
    double best = kInf;
    using Item = std::pair<double, Index>;
    for (std::size_t e = 0; e < seg_.size(); ++e) {
      std::vector<double> dist(nv, kInf);
      dist[seg_[e].first] = 0.0;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      pq.emplace(0.0, seg_[e].first);
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (auto [w, f] : adj_[u]) {
          if (f == e) continue;
          if (d + len_[f] < dist[w]) {
            dist[w] = d + len_[f];
            pq.emplace(dist[w], w);
          }
        }
      }
      best = std::min(best, dist[seg_[e].second] + len_[e]);
    }
    return best;
  }

  PointCloud v_;
  std::vector<std::pair<Index, Index>> seg_;
  ModelKind kind_;
  nlohmann::json params_;
  std::vector<double> len_, offset_;
  std::vector<std::vector<std::pair<Index, std::size_t>>> adj_;
  std::vector<double> vdist_;
  double tube_ = 0.0;
};

}  // namespace

std::shared_ptr<const ModelImpl> make_graph(PointCloud vertices,
                                            std::vector<std::pair<Index, Index>> segments,
                                            ModelKind kind, nlohmann::json params) {
  return std::make_shared<GraphModel>(std::move(vertices), std::move(segments), kind,
                                      std::move(params));
}

}  // namespace rsl::detail
