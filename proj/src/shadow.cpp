#include "rsl/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "exact_lp.hpp"
#include "rsl/error.hpp"
#include "rsl/parallel.hpp"

namespace rsl {

using detail::Rational;

namespace {

struct Box {
  std::vector<double> lo, hi;
};

Box bounding_box(const PointCloud& pts, const Simplex& cell) {
  Box b{std::vector<double>(pts.dim(), std::numeric_limits<double>::infinity()),
        std::vector<double>(pts.dim(), -std::numeric_limits<double>::infinity())};
  for (Index v : cell)
    for (std::size_t c = 0; c < pts.dim(); ++c) {
      b.lo[c] = std::min(b.lo[c], pts[v][c]);
      b.hi[c] = std::max(b.hi[c], pts[v][c]);
    }
  return b;
}

bool boxes_meet(const Box& a, const Box& b) {
  for (std::size_t c = 0; c < a.lo.size(); ++c)
    if (a.hi[c] < b.lo[c] || b.hi[c] < a.lo[c]) return false;
  return true;
}

bool share_vertex(const PointCloud& pts, const std::vector<const Simplex*>& cells) {
  // Common index, or common coordinates for distinct indices.
  for (Index v : *cells[0]) {
    bool everywhere = true;
    for (std::size_t j = 1; j < cells.size() && everywhere; ++j) {
      bool found = false;
      for (Index w : *cells[j])
        if (w == v || std::equal(pts[v].begin(), pts[v].end(), pts[w].begin())) {
          found = true;
          break;
        }
      everywhere = found;
    }
    if (everywhere) return true;
  }
  return false;
}

// A hyperplane strictly separating two point sets, found along the
// centroid direction with a rigorous bound on dot-product rounding.
bool centroid_separates(const PointCloud& pts, const Simplex& a, const Simplex& b) {
  const std::size_t n = pts.dim();
  std::vector<double> ca(n, 0.0), cb(n, 0.0);
  for (Index v : a)
    for (std::size_t c = 0; c < n; ++c) ca[c] += pts[v][c] / static_cast<double>(a.size());
  for (Index v : b)
    for (std::size_t c = 0; c < n; ++c) cb[c] += pts[v][c] / static_cast<double>(b.size());
  std::vector<double> u(n);
  for (std::size_t c = 0; c < n; ++c) u[c] = cb[c] - ca[c];
  const double gamma = static_cast<double>(n + 1) * 0x1.0p-52;
  double max_a = -std::numeric_limits<double>::infinity(), min_b = std::numeric_limits<double>::infinity();
  double err = 0.0;
  auto project = [&](Index v) {
    double s = 0.0, mag = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      s += u[c] * pts[v][c];
      mag += std::fabs(u[c] * pts[v][c]);
    }
    err = std::max(err, gamma * mag);
    return s;
  };
  for (Index v : a) max_a = std::max(max_a, project(v));
  for (Index v : b) min_b = std::min(min_b, project(v));
  return max_a + 2.0 * err + std::numeric_limits<double>::min() < min_b;
}

bool lp_intersect(const PointCloud& pts, const std::vector<const Simplex*>& cells) {
  const std::size_t n = pts.dim();
  const std::size_t k = cells.size();
  std::size_t cols = 0;
  std::vector<std::size_t> start(k);
  for (std::size_t j = 0; j < k; ++j) {
    start[j] = cols;
    cols += cells[j]->size();
  }
  const std::size_t rows = k + (k - 1) * n;
  std::vector<Rational> a(rows * cols), b(rows);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < cells[j]->size(); ++i) a[j * cols + start[j] + i] = 1;
    b[j] = 1;
  }
  // sum_i lambda_0i p_i - sum_i lambda_ji q_i = 0, coordinate by coordinate.
  for (std::size_t j = 1; j < k; ++j)
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t r = k + (j - 1) * n + c;
      for (std::size_t i = 0; i < cells[0]->size(); ++i)
        a[r * cols + start[0] + i] = Rational(pts[(*cells[0])[i]][c]);
      for (std::size_t i = 0; i < cells[j]->size(); ++i)
        a[r * cols + start[j] + i] = -Rational(pts[(*cells[j])[i]][c]);
    }
  return detail::exact_feasible(rows, cols, std::move(a), std::move(b));
}

bool in_hull(const PointCloud& pts, const Simplex& cell, std::span<const double> x) {
  const std::size_t n = pts.dim();
  for (Index v : cell)
    if (std::equal(x.begin(), x.end(), pts[v].begin())) return true;
  Box box = bounding_box(pts, cell);
  for (std::size_t c = 0; c < n; ++c)
    if (x[c] < box.lo[c] || x[c] > box.hi[c]) return false;
  const std::size_t cols = cell.size(), rows = n + 1;
  std::vector<Rational> a(rows * cols), b(rows);
  for (std::size_t i = 0; i < cols; ++i) {
    a[i] = 1;
    for (std::size_t c = 0; c < n; ++c) a[(c + 1) * cols + i] = Rational(pts[cell[i]][c]);
  }
  b[0] = 1;
  for (std::size_t c = 0; c < n; ++c) b[c + 1] = Rational(x[c]);
  return detail::exact_feasible(rows, cols, std::move(a), std::move(b));
}

bool decide(const ConvexCellSystem& cs, const std::vector<const Simplex*>& cells,
            const std::vector<Box>* boxes, std::span<const std::size_t> ids) {
  if (cells.size() == 1) return true;
  if (share_vertex(cs.coords, cells)) return true;
  if (boxes) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (!boxes_meet((*boxes)[ids[i]], (*boxes)[ids[j]])) return false;
  }
  if (cells.size() == 2 && centroid_separates(cs.coords, *cells[0], *cells[1])) return false;
  return lp_intersect(cs.coords, cells);
}

}  // namespace

ConvexCellSystem::ConvexCellSystem(PointCloud c, CliqueList l) : coords(std::move(c)), cells(std::move(l)) {
  for (const auto& cell : cells.cliques) {
    if (cell.empty()) throw PreconditionError("convex cell has no vertices");
    for (Index v : cell)
      if (v < 0 || static_cast<std::size_t>(v) >= coords.size())
        throw PreconditionError("convex cell refers to a missing point");
  }
}

bool hulls_intersect(const ConvexCellSystem& cs, std::span<const std::size_t> ids) {
  if (ids.empty()) throw PreconditionError("hulls_intersect needs at least one cell");
  std::vector<const Simplex*> cells;
  std::vector<Box> boxes(cs.size());
  for (std::size_t id : ids) {
    if (id >= cs.size()) throw PreconditionError("cell id out of range");
    cells.push_back(&cs.cells.cliques[id]);
    boxes[id] = bounding_box(cs.coords, cs.cells.cliques[id]);
  }
  return decide(cs, cells, &boxes, ids);
}

nlohmann::json NerveComplex::to_json() const {
  nlohmann::json j = complex.to_json();
  j["cells"] = cells;
  return j;
}

NerveComplex build_nerve(const ConvexCellSystem& cs, int cap) {
  if (cs.size() == 0) throw PreconditionError("nerve of an empty cell system");
  if (cap < 1) throw PreconditionError("dimension cap must be at least 1");
  const std::size_t m = cs.size();
  std::vector<Box> boxes(m);
  for (std::size_t i = 0; i < m; ++i) boxes[i] = bounding_box(cs.coords, cs.cells.cliques[i]);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (boxes_meet(boxes[i], boxes[j])) pairs.emplace_back(i, j);
  std::vector<char> pair_ok(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t p) {
    std::size_t ids[2] = {pairs[p].first, pairs[p].second};
    pair_ok[p] = decide(cs, {&cs.cells.cliques[ids[0]], &cs.cells.cliques[ids[1]]}, &boxes, ids);
  });

  std::vector<std::vector<Index>> up(m);
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (pair_ok[p]) up[pairs[p].first].push_back(static_cast<Index>(pairs[p].second));

  std::vector<std::vector<Simplex>> layers(static_cast<std::size_t>(cap) + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (Index j : up[i]) layers[1].push_back({static_cast<Index>(i), j});

  auto pair_edge = [&](Index a, Index b) {
    return std::binary_search(up[a].begin(), up[a].end(), b);
  };
  // Each higher layer extends the previous one by a larger vertex adjacent to
  // all members; survivors are decided jointly.
  for (int d = 2; d <= cap; ++d) {
    std::vector<Simplex> candidates;
    for (const auto& s : layers[d - 1])
      for (Index w : up[s.back()]) {
        bool ok = true;
        for (std::size_t t = 0; t + 1 < s.size() && ok; ++t) ok = pair_edge(s[t], w);
        if (!ok) continue;
        Simplex c = s;
        c.push_back(w);
        // Every codimension-one face must already be present.
        for (std::size_t drop = 0; drop + 1 < c.size() && ok; ++drop) {
          Simplex f = c;
          f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
          ok = std::binary_search(layers[d - 1].begin(), layers[d - 1].end(), f);
        }
        if (ok) candidates.push_back(std::move(c));
      }
    std::vector<char> keep(candidates.size(), 0);
    parallel_for(candidates.size(), [&](std::size_t c) {
      std::vector<const Simplex*> cells;
      std::vector<std::size_t> ids;
      for (Index v : candidates[c]) {
        cells.push_back(&cs.cells.cliques[v]);
        ids.push_back(static_cast<std::size_t>(v));
      }
      keep[c] = decide(cs, cells, nullptr, ids);
    });
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (keep[c]) layers[d].push_back(std::move(candidates[c]));
    if (layers[d].empty()) break;
  }

  NerveComplex out;
  out.complex = SimplicialComplex::from_sorted_layers(m, cap, std::move(layers));
  if (auto bad = out.complex.closure_violation())
    throw InternalError("nerve is not face-closed");
  out.cells = cs.cells.cliques;
  return out;
}

bool shadow_contains(const ConvexCellSystem& cs, std::span<const double> x) {
  if (x.size() != cs.coords.dim()) throw PreconditionError("point dimension mismatch");
  for (const auto& cell : cs.cells.cliques)
    if (in_hull(cs.coords, cell, x)) return true;
  return false;
}

Point project_point(const SimplicialComplex& complex, const PointCloud& coords,
                    const BarycentricPoint& b) {
  if (!complex.contains(b.carrier)) throw PreconditionError("carrier is not a simplex of the complex");
  if (b.weights.size() != b.carrier.size()) throw PreconditionError("weight count differs from carrier size");
  double total = 0.0;
  for (double w : b.weights) {
    if (!(w >= 0.0)) throw PreconditionError("barycentric weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw PreconditionError("barycentric weights must sum to 1");
  Point p(coords.dim(), 0.0);
  for (std::size_t i = 0; i < b.carrier.size(); ++i)
    for (std::size_t c = 0; c < coords.dim(); ++c) p[c] += b.weights[i] * coords[b.carrier[i]][c];
  return p;
}

// --------------------------------------------------------------------------
// Raster oracle

namespace {

using P2 = std::array<double, 2>;

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<P2> hull_2d(std::vector<P2> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<P2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

// Separating-axis test between a convex polygon (or segment/point) and an
// axis-aligned closed square.
bool hull_meets_square(const std::vector<P2>& h, double x0, double y0, double x1, double y1) {
  double hx0 = h[0][0], hx1 = h[0][0], hy0 = h[0][1], hy1 = h[0][1];
  for (const auto& q : h) {
    hx0 = std::min(hx0, q[0]);
    hx1 = std::max(hx1, q[0]);
    hy0 = std::min(hy0, q[1]);
    hy1 = std::max(hy1, q[1]);
  }
  if (hx1 < x0 || hx0 > x1 || hy1 < y0 || hy0 > y1) return false;
  if (h.size() == 1) return true;
  const P2 corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  const std::size_t edges = h.size() == 2 ? 1 : h.size();
  for (std::size_t e = 0; e < edges; ++e) {
    const P2& a = h[e];
    const P2& b = h[(e + 1) % h.size()];
    double nx = -(b[1] - a[1]), ny = b[0] - a[0];
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (const auto& q : h) {
      double s = nx * q[0] + ny * q[1];
      hmin = std::min(hmin, s);
      hmax = std::max(hmax, s);
    }
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    for (const auto& q : corners) {
      double s = nx * q[0] + ny * q[1];
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    if (hmax < smin || smax < hmin) return false;
  }
  return true;
}

int count_components(const std::vector<char>& grid, int w, int h, char value, bool eight,
                     bool skip_border_touching) {
  std::vector<char> seen(grid.size(), 0);
  std::vector<int> stack;
  int comps = 0;
  for (int start = 0; start < w * h; ++start) {
    if (grid[start] != value || seen[start]) continue;
    bool border = false;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      int x = cur % w, y = cur / w;
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) border = true;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          if (!eight && dx && dy) continue;
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          int nb = ny * w + nx;
          if (grid[nb] == value && !seen[nb]) {
            seen[nb] = 1;
            stack.push_back(nb);
          }
        }
    }
    if (!(skip_border_touching && border)) ++comps;
  }
  return comps;
}

}  // namespace

RasterBetti raster_betti_2d(const ConvexCellSystem& cs, int resolution, const std::string& pgm_path) {
  if (cs.coords.dim() != 2) throw PreconditionError("raster oracle needs planar points");
  if (resolution < 64) throw PreconditionError("raster resolution must be at least 64");
  if (cs.size() == 0) return {0, 0, resolution};

  std::vector<std::vector<P2>> hulls;
  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  for (const auto& cell : cs.cells.cliques) {
    std::vector<P2> pts;
    for (Index v : cell) {
      P2 q{cs.coords[v][0], cs.coords[v][1]};
      for (int c = 0; c < 2; ++c) {
        lo[c] = std::min(lo[c], q[c]);
        hi[c] = std::max(hi[c], q[c]);
      }
      pts.push_back(q);
    }
    hulls.push_back(hull_2d(std::move(pts)));
  }
  const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-9});

  auto rasterize = [&](int res, bool write) {
    const double cell = span / res;
    const double ox = lo[0] - cell, oy = lo[1] - cell;
    const int w = static_cast<int>(std::ceil((hi[0] - lo[0]) / cell)) + 3;
    const int h = static_cast<int>(std::ceil((hi[1] - lo[1]) / cell)) + 3;
    std::vector<char> grid(static_cast<std::size_t>(w) * h, 0);
    for (const auto& hull : hulls) {
      double bx0 = hull[0][0], bx1 = bx0, by0 = hull[0][1], by1 = by0;
      for (const auto& q : hull) {
        bx0 = std::min(bx0, q[0]);
        bx1 = std::max(bx1, q[0]);
        by0 = std::min(by0, q[1]);
        by1 = std::max(by1, q[1]);
      }
      int i0 = std::max(0, static_cast<int>(std::floor((bx0 - ox) / cell)) - 1);
      int i1 = std::min(w - 1, static_cast<int>(std::floor((bx1 - ox) / cell)) + 1);
      int j0 = std::max(0, static_cast<int>(std::floor((by0 - oy) / cell)) - 1);
      int j1 = std::min(h - 1, static_cast<int>(std::floor((by1 - oy) / cell)) + 1);
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
          char& g = grid[static_cast<std::size_t>(j) * w + i];
          if (g) continue;
          if (hull_meets_square(hull, ox + i * cell, oy + j * cell, ox + (i + 1) * cell, oy + (j + 1) * cell))
            g = 1;
        }
    }
    if (write) {
      std::ofstream out(pgm_path, std::ios::binary);
      out << "P5\n" << w << " " << h << "\n255\n";
      for (int j = h - 1; j >= 0; --j)
        for (int i = 0; i < w; ++i) out.put(grid[static_cast<std::size_t>(j) * w + i] ? 0 : 255);
    }
    int b0 = count_components(grid, w, h, 1, true, false);
    int b1 = count_components(grid, w, h, 0, false, true);
    return std::pair{b0, b1};
  };

  auto prev = rasterize(resolution, false);
  for (int res = resolution * 2; res <= 4096; res *= 2) {
    auto cur = rasterize(res, false);
    if (cur == prev) {
      if (!pgm_path.empty()) rasterize(res, true);
      return {cur.first, cur.second, res};
    }
    prev = cur;
  }
  throw InconclusiveError("raster Betti numbers did not settle by resolution 4096");
}

}  // namespace rsl
