#include "rsl/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "exact_lp.hpp"
#include "rsl/error.hpp"
#include "rsl/rips.hpp"

namespace rsl {

using detail::Rational;

std::size_t Polyline::edge_count() const {
  const std::size_t n = points.size();
  if (n < 2) return 0;
  return closed ? n : n - 1;
}

double Polyline::edge_length(std::size_t e) const {
  return distance(points[e], points[(e + 1) % points.size()]);
}

nlohmann::json Polyline::to_json() const {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < points.size(); ++i) pts.push_back(points.point(i));
  return {{"closed", closed}, {"vertices", pts}};
}

void Polyline::write_csv(std::ostream& out) const {
  std::string header = "# ";
  for (std::size_t c = 0; c < points.dim(); ++c) header += (c ? ",x" : "x") + std::to_string(c);
  rsl::write_csv(out, points, header.c_str());
}

OrderedSample order_by_projection(const ModelSpace& model, const PointCloud& s) {
  if (!model.is_closed_curve()) throw PreconditionError("ordering by projection needs a closed curve");
  if (s.empty()) throw PreconditionError("ordering needs a nonempty sample");
  struct Item {
    double t, d;
    Index i;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Projection p;
    try {
      p = model.project(s[i]);
    } catch (const AmbiguityError& e) {
      throw AmbiguityError("sample " + std::to_string(i) + " has no unique projection: " + e.what());
    }
    items.push_back({p.param, p.distance, static_cast<Index>(i)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.t < b.t || (a.t == b.t && a.i < b.i);
  });
  const double tol = 1e-12 * model.length();
  OrderedSample out;
  for (std::size_t a = 0; a < items.size();) {
    std::size_t b = a + 1;
    while (b < items.size() && items[b].t - items[a].t <= tol) ++b;
    std::vector<Index> group;
    std::size_t best = a;
    for (std::size_t c = a; c < b; ++c) {
      group.push_back(items[c].i);
      if (items[c].d < items[best].d || (items[c].d == items[best].d && items[c].i < items[best].i)) best = c;
    }
    std::sort(group.begin(), group.end());
    out.representatives.push_back(items[best].i);
    out.params.push_back(items[a].t);
    out.groups.push_back(std::move(group));
    a = b;
  }
  return out;
}

// --------------------------------------------------------------------------
// Exact segment predicates

namespace {

using QPoint = std::vector<Rational>;

QPoint to_rational(std::span<const double> p) {
  QPoint q;
  q.reserve(p.size());
  for (double v : p) q.emplace_back(v);
  return q;
}

int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

int orient2(const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by,
            const Rational& cx, const Rational& cy) {
  return sgn((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

bool between(const Rational& a, const Rational& b, const Rational& p) {
  return (a <= p && p <= b) || (b <= p && p <= a);
}

// Closed segments ab and cd in the plane spanned by coordinates x, y.
bool segments_meet_2d(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d, std::size_t x,
                      std::size_t y) {
  int o1 = orient2(a[x], a[y], b[x], b[y], c[x], c[y]);
  int o2 = orient2(a[x], a[y], b[x], b[y], d[x], d[y]);
  int o3 = orient2(c[x], c[y], d[x], d[y], a[x], a[y]);
  int o4 = orient2(c[x], c[y], d[x], d[y], b[x], b[y]);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on = [&](const QPoint& p, const QPoint& q, const QPoint& r) {
    return between(p[x], q[x], r[x]) && between(p[y], q[y], r[y]);
  };
  if (o1 == 0 && on(a, b, c)) return true;
  if (o2 == 0 && on(a, b, d)) return true;
  if (o3 == 0 && on(c, d, a)) return true;
  if (o4 == 0 && on(c, d, b)) return true;
  return false;
}

QPoint sub(const QPoint& a, const QPoint& b) {
  QPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QPoint cross3(const QPoint& u, const QPoint& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

bool is_zero(const QPoint& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

bool segments_meet_3d(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d) {
  QPoint ab = sub(b, a), ac = sub(c, a), ad = sub(d, a);
  QPoint n = cross3(ab, ac);
  if (is_zero(n)) n = cross3(ab, ad);
  if (is_zero(n)) {
    QPoint cd = sub(d, c);
    n = cross3(cd, sub(a, c));
    if (is_zero(n)) {
      // All four points on one line: compare intervals along a varying axis.
      QPoint dir = is_zero(ab) ? sub(d, c) : ab;
      std::size_t axis = 0;
      while (axis < 3 && dir[axis] == 0) ++axis;
      if (axis == 3) return a == c;  // both segments are the same point or points
      auto lo = [&](const Rational& p, const Rational& q) { return p < q ? p : q; };
      auto hi = [&](const Rational& p, const Rational& q) { return p < q ? q : p; };
      return !(hi(a[axis], b[axis]) < lo(c[axis], d[axis]) || hi(c[axis], d[axis]) < lo(a[axis], b[axis]));
    }
  }
  Rational det = n[0] * ad[0] + n[1] * ad[1] + n[2] * ad[2];
  Rational det2 = n[0] * ac[0] + n[1] * ac[1] + n[2] * ac[2];
  if (det != 0 || det2 != 0) return false;  // not coplanar
  // Drop the axis where the normal is largest; projection is injective on the plane.
  std::size_t drop = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (abs(n[i]) > abs(n[drop])) drop = i;
  std::size_t x = drop == 0 ? 1 : 0, y = drop == 2 ? 1 : 2;
  return segments_meet_2d(a, b, c, d, x, y);
}

bool segments_meet_lp(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d) {
  const std::size_t n = a.size();
  const std::size_t rows = 2 + n, cols = 4;
  std::vector<Rational> m(rows * cols), rhs(rows);
  m[0] = m[1] = 1;
  m[cols + 2] = m[cols + 3] = 1;
  rhs[0] = rhs[1] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 2 + i;
    m[r * cols + 0] = a[i];
    m[r * cols + 1] = b[i];
    m[r * cols + 2] = -c[i];
    m[r * cols + 3] = -d[i];
  }
  return detail::exact_feasible(rows, cols, std::move(m), std::move(rhs));
}

bool segments_meet(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d) {
  switch (a.size()) {
    case 1: {
      auto lo = [](const Rational& p, const Rational& q) { return p < q ? p : q; };
      auto hi = [](const Rational& p, const Rational& q) { return p < q ? q : p; };
      return !(hi(a[0], b[0]) < lo(c[0], d[0]) || hi(c[0], d[0]) < lo(a[0], b[0]));
    }
    case 2: return segments_meet_2d(a, b, c, d, 0, 1);
    case 3: return segments_meet_3d(a, b, c, d);
    default: return segments_meet_lp(a, b, c, d);
  }
}

// Edges (a,v) and (v,b) overlap beyond v when they point the same way.
bool adjacent_overlap(const QPoint& a, const QPoint& v, const QPoint& b) {
  QPoint u = sub(a, v), w = sub(b, v);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      if (u[i] * w[j] - u[j] * w[i] != 0) return false;
  Rational dot = 0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * w[i];
  return dot > 0;
}

bool boxes_apart(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                 std::span<const double> d) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    double lo1 = std::min(a[i], b[i]), hi1 = std::max(a[i], b[i]);
    double lo2 = std::min(c[i], d[i]), hi2 = std::max(c[i], d[i]);
    if (hi1 < lo2 || hi2 < lo1) return true;
  }
  return false;
}

}  // namespace

bool polyline_is_simple(const Polyline& p) {
  const std::size_t n = p.points.size();
  if (n < 2) return true;
  const std::size_t m = p.edge_count();
  std::vector<QPoint> q;
  for (std::size_t i = 0; i < n; ++i) q.push_back(to_rational(p.points[i]));
  for (std::size_t e = 0; e < m; ++e)
    if (q[e] == q[(e + 1) % n]) return false;  // degenerate edge
  auto adjacent = [&](std::size_t i, std::size_t j) {
    return j == i + 1 || (p.closed && i == 0 && j == m - 1);
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t a = i, b = (i + 1) % n, c = j, d = (j + 1) % n;
      if (adjacent(i, j)) {
        if (m == 2) {
          // Two edges over the same two vertices retrace each other.
          return false;
        }
        // Shared vertex v; the other ends are x and y.
        std::size_t v = (b == c) ? b : a, x = (b == c) ? a : b, y = (b == c) ? d : c;
        if (adjacent_overlap(q[x], q[v], q[y])) return false;
        continue;
      }
      if (boxes_apart(p.points[a], p.points[b], p.points[c], p.points[d])) continue;
      if (segments_meet(q[a], q[b], q[c], q[d])) return false;
    }
  return true;
}

// --------------------------------------------------------------------------

nlohmann::json ReconstructionResult::to_json() const {
  nlohmann::json j{{"verdict", verdict_name(verdict)},
                   {"reasons", reasons},
                   {"conditions", conditions.to_json()},
                   {"zeta_measured", zeta_measured}};
  if (verdict == Verdict::OutOfRegime) {
    j["curve"] = nullptr;
    j["checks"] = nullptr;
    return j;
  }
  j["curve"] = curve.to_json();
  j["representatives"] = order.representatives;
  j["params"] = order.params;
  j["checks"] = {{"simple", checks.simple},
                 {"closed", checks.closed},
                 {"max_edge", checks.max_edge},
                 {"edges_under_beta", checks.edges_under_beta},
                 {"in_shadow", checks.in_shadow},
                 {"hausdorff_to_model", checks.hausdorff_to_model},
                 {"hausdorff_bound", checks.hausdorff_bound},
                 {"hausdorff_within_bound", checks.hausdorff_within_bound},
                 {"visits_each_once", checks.visits_each_once}};
  return j;
}

ReconstructionResult build_curve_K(const ModelSpace& model, const PointCloud& s, double beta, double tau,
                                   double zeta, const std::set<std::string>& faults) {
  if (!model.is_closed_curve()) throw PreconditionError("reconstruction needs a closed curve model");
  if (s.dim() != model.ambient_dim()) throw PreconditionError("sample dimension differs from the model");
  if (!(zeta > 0.0)) throw PreconditionError("zeta must be positive");
  ReconstructionResult res;
  res.order = order_by_projection(model, s);
  res.zeta_measured = model.density_radius(res.order.params);
  res.conditions = check_scale_conditions(model, beta, tau, zeta);
  Hypothesis dense;
  dense.name = "sample_density";
  dense.statement = "projections are zeta-dense: measured density <= zeta";
  dense.lhs = res.zeta_measured;
  dense.rhs = zeta;
  dense.holds = res.zeta_measured <= zeta;
  res.conditions.add(dense);
  res.conditions.inject_faults(faults);
  for (const auto& name : res.conditions.failed()) res.reasons.push_back("hypothesis " + name + " fails");
  if (!res.reasons.empty()) {
    res.verdict = Verdict::OutOfRegime;
    return res;
  }

  res.curve.points = s.select(res.order.representatives);
  res.curve.closed = true;
  auto& c = res.checks;
  const std::size_t m = res.curve.edge_count();
  c.closed = res.curve.closed && res.curve.points.size() >= 3;
  c.simple = c.closed && polyline_is_simple(res.curve);
  for (std::size_t e = 0; e < m; ++e) c.max_edge = std::max(c.max_edge, res.curve.edge_length(e));
  c.edges_under_beta = c.max_edge < beta;

  SimplicialComplex rips = build_rips(euclidean_metric(s), beta, 1);
  c.in_shadow = m > 0;
  const auto& reps = res.order.representatives;
  for (std::size_t e = 0; e < m && c.in_shadow; ++e) {
    Simplex edge{reps[e], reps[(e + 1) % reps.size()]};
    std::sort(edge.begin(), edge.end());
    c.in_shadow = rips.contains(edge);
  }

  std::vector<Index> sorted = reps;
  std::sort(sorted.begin(), sorted.end());
  c.visits_each_once = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
                       sorted.size() == res.order.groups.size();

  // Both sides discretized at spacing h; each side is within h/2 of its grid.
  const double h = zeta / 10.0;
  PointCloud model_grid = model.discretize(h);
  PointCloud k_grid(s.dim());
  for (std::size_t e = 0; e < m; ++e) {
    auto a = res.curve.points[e];
    auto b = res.curve.points[(e + 1) % res.curve.points.size()];
    auto pieces = static_cast<std::size_t>(std::ceil(res.curve.edge_length(e) / h));
    pieces = std::max<std::size_t>(pieces, 1);
    for (std::size_t k = 0; k < pieces; ++k) {
      Point p(s.dim());
      double w = static_cast<double>(k) / static_cast<double>(pieces);
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = a[i] + w * (b[i] - a[i]);
      k_grid.push_back(p);
    }
  }
  if (k_grid.empty()) k_grid = res.curve.points;
  c.hausdorff_to_model = hausdorff_distance(model_grid, k_grid) + h;
  const double reach = model.constants(std::min(beta, model.delta_max() / 2.0)).reach;
  c.hausdorff_bound = tau + zeta + beta * beta / (8.0 * reach);
  c.hausdorff_within_bound = c.hausdorff_to_model <= c.hausdorff_bound;

  res.verdict = Verdict::Consistent;
  auto fail = [&](bool ok, const char* what) {
    if (!ok) {
      res.verdict = Verdict::Inconsistent;
      res.reasons.push_back(what);
    }
  };
  fail(c.closed, "curve is not closed");
  fail(c.simple, "curve is not simple");
  fail(c.edges_under_beta, "an edge is not shorter than beta");
  fail(c.in_shadow, "an edge is not a Rips edge at scale beta");
  fail(c.hausdorff_within_bound, "Hausdorff distance to the model exceeds tau + zeta + sag");
  fail(c.visits_each_once, "curve does not visit each representative once");
  return res;
}

// --------------------------------------------------------------------------

namespace {

double radical_inverse(std::size_t k, unsigned base) {
  double v = 0.0, f = 1.0 / base;
  while (k) {
    v += static_cast<double>(k % base) * f;
    k /= base;
    f /= base;
  }
  return v;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

LemmaResult check_intermediate_lemma(const ModelSpace& model, const PointCloud& points, double beta,
                                     std::size_t samples) {
  if (!model.is_closed_curve()) throw PreconditionError("the arc check needs a closed curve");
  if (points.empty()) throw PreconditionError("the arc check needs at least one point");
  const double eta = model.constants(std::min(beta, model.delta_max() / 2.0)).eta;
  if (!(3.0 * beta < eta)) throw PreconditionError("scale violates 3 beta < eta");
  const std::size_t k = points.size();
  if (k - 1 > std::size(kPrimes)) throw PreconditionError("too many points for the low-discrepancy sequence");
  LemmaResult out;
  if (k == 1) return out;

  const double len = model.length();
  std::vector<double> t(k);
  for (std::size_t i = 0; i < k; ++i) t[i] = model.project(points[i]).param;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (!(model.geodesic(t[i], t[j]) < beta))
        throw PreconditionError("points are not pairwise within beta along the curve");

  // Shortest arc containing all t_i: the complement of the largest gap.
  std::vector<double> sorted = t;
  std::sort(sorted.begin(), sorted.end());
  double gap = sorted.front() + len - sorted.back();
  double start = sorted.front(), arc = sorted.back() - sorted.front();
  for (std::size_t i = 1; i < k; ++i)
    if (sorted[i] - sorted[i - 1] > gap) {
      gap = sorted[i] - sorted[i - 1];
      start = sorted[i];
      arc = len - gap;
    }
  const double tol = 1e-9 * len;
  auto on_arc = [&](double s) {
    double off = std::fmod(s - start + 2.0 * len, len);
    return off <= arc + tol || off >= len - tol;
  };

  std::vector<double> u(k - 1), w(k);
  for (std::size_t q = 0; q < samples; ++q) {
    // Uniform weights on the simplex from sorted coordinates of a Halton point.
    for (std::size_t j = 0; j + 1 < k; ++j) u[j] = radical_inverse(q + 1, kPrimes[j]);
    std::sort(u.begin(), u.end());
    double prev = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      w[j] = u[j] - prev;
      prev = u[j];
    }
    w[k - 1] = 1.0 - prev;
    Point x(points.dim(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < x.size(); ++c) x[c] += w[i] * points[i][c];
    ++out.samples;
    bool ok = false;
    try {
      ok = on_arc(model.project(x).param);
    } catch (const AmbiguityError&) {
      ok = false;
    }
    if (!ok) {
      out.holds = false;
      out.witness = x;
      return out;
    }
  }
  return out;
}

}  // namespace rsl
