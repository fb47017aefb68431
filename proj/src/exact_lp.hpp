#pragma once

#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace rsl::detail {

using Rational = boost::multiprecision::mpq_rational;

/// Whether {x >= 0 : A x = b} is nonempty, decided exactly by phase-one
/// simplex with Bland's rule. A is row-major with `cols` columns.
bool exact_feasible(std::size_t rows, std::size_t cols, std::vector<Rational> a,
                    std::vector<Rational> b);

}  // namespace rsl::detail
