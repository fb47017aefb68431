#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace rsl {

using Index = std::int32_t;
using Point = std::vector<double>;

/// Ordered finite subset of R^N stored row-major. Index identity matters:
/// complexes built on a cloud refer to points by position.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::size_t dim) : dim_(dim) {}
  PointCloud(std::size_t dim, std::vector<double> flat);

  static PointCloud from_points(const std::vector<Point>& points);

  std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  Point point(std::size_t i) const;

  void push_back(std::span<const double> p);

  /// Points at the given positions, in the given order.
  PointCloud select(std::span<const Index> ids) const;
  PointCloud prefix(std::size_t n) const;

  const std::vector<double>& flat() const { return flat_; }

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> flat_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// One point per line, comma separated. Lines starting with '#' are skipped.
PointCloud read_csv(std::istream& in);
void write_csv(std::ostream& out, const PointCloud& cloud,
               const char* header = nullptr);

}  // namespace rsl
