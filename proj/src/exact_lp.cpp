#include "exact_lp.hpp"

#include "rsl/error.hpp"

namespace rsl::detail {

bool exact_feasible(std::size_t rows, std::size_t cols, std::vector<Rational> a,
                    std::vector<Rational> b) {
  if (a.size() != rows * cols || b.size() != rows) throw InternalError("LP shape mismatch");
  if (rows == 0) return true;
  for (std::size_t r = 0; r < rows; ++r)
    if (b[r] < 0) {
      b[r] = -b[r];
      for (std::size_t c = 0; c < cols; ++c) a[r * cols + c] = -a[r * cols + c];
    }

  // Tableau columns: original variables, then one artificial per row.
  const std::size_t width = cols + rows;
  std::vector<Rational> t(rows * width);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[r * width + c] = a[r * cols + c];
    t[r * width + cols + r] = 1;
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = cols + r;

  // Reduced costs of the phase-one objective (sum of artificials).
  std::vector<Rational> cost(width);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) cost[c] -= t[r * width + c];

  Rational ratio, best;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t c = 0; c < width; ++c)
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    if (enter == width) break;

    std::size_t leave = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      const Rational& coef = t[r * width + enter];
      if (coef <= 0) continue;
      ratio = b[r] / coef;
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) throw InternalError("phase-one objective is unbounded");

    const Rational piv = t[leave * width + enter];
    for (std::size_t c = 0; c < width; ++c) t[leave * width + c] /= piv;
    b[leave] /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const Rational f = t[r * width + enter];
      if (f == 0) continue;
      for (std::size_t c = 0; c < width; ++c) t[r * width + c] -= f * t[leave * width + c];
      b[r] -= f * b[leave];
    }
    const Rational f = cost[enter];
    for (std::size_t c = 0; c < width; ++c) cost[c] -= f * t[leave * width + c];
    basis[leave] = enter;
  }
  // Feasible iff every artificial still in the basis sits at zero.
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] >= cols && b[r] != 0) return false;
  return true;
}

}  // namespace rsl::detail
