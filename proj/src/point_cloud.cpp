#include "rsl/point_cloud.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

#include "rsl/error.hpp"

namespace rsl {

PointCloud::PointCloud(std::size_t dim, std::vector<double> flat)
    : dim_(dim), flat_(std::move(flat)) {
  if (dim_ == 0 && !flat_.empty())
    throw PreconditionError("point cloud of dimension 0 cannot hold coordinates");
  if (dim_ != 0 && flat_.size() % dim_ != 0)
    throw PreconditionError("flat coordinate buffer is not a multiple of the dimension");
  for (double v : flat_)
    if (!std::isfinite(v)) throw PreconditionError("point coordinates must be finite");
}

PointCloud PointCloud::from_points(const std::vector<Point>& points) {
  if (points.empty()) return {};
  PointCloud out(points.front().size());
  for (const auto& p : points) out.push_back(p);
  return out;
}

Point PointCloud::point(std::size_t i) const {
  auto s = (*this)[i];
  return {s.begin(), s.end()};
}

void PointCloud::push_back(std::span<const double> p) {
  if (dim_ == 0 && flat_.empty()) dim_ = p.size();
  if (p.size() != dim_ || dim_ == 0)
    throw PreconditionError("point dimension " + std::to_string(p.size()) +
                            " does not match cloud dimension " + std::to_string(dim_));
  for (double v : p)
    if (!std::isfinite(v)) throw PreconditionError("point coordinates must be finite");
  flat_.insert(flat_.end(), p.begin(), p.end());
}

PointCloud PointCloud::select(std::span<const Index> ids) const {
  PointCloud out(dim_);
  out.flat_.reserve(ids.size() * dim_);
  for (Index i : ids) {
    if (i < 0 || static_cast<std::size_t>(i) >= size())
      throw PreconditionError("point index out of range");
    auto p = (*this)[i];
    out.flat_.insert(out.flat_.end(), p.begin(), p.end());
  }
  return out;
}

PointCloud PointCloud::prefix(std::size_t n) const {
  if (n > size()) throw PreconditionError("prefix longer than cloud");
  return PointCloud(dim_, std::vector<double>(flat_.begin(), flat_.begin() + n * dim_));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

PointCloud read_csv(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    row.clear();
    const char* p = line.c_str() + first;
    while (true) {
      char* end = nullptr;
      errno = 0;
      double v = std::strtod(p, &end);
      if (end == p || errno == ERANGE)
        throw SchemaError("malformed number on CSV line " + std::to_string(lineno));
      row.push_back(v);
      p = end;
      while (*p == ' ' || *p == '\t') ++p;
      if (*p == '\0') break;
      if (*p != ',') throw SchemaError("expected ',' on CSV line " + std::to_string(lineno));
      ++p;
    }
    if (!cloud.empty() && row.size() != cloud.dim())
      throw SchemaError("inconsistent dimension on CSV line " + std::to_string(lineno));
    cloud.push_back(row);
  }
  return cloud;
}

void write_csv(std::ostream& out, const PointCloud& cloud, const char* header) {
  if (header) out << header << '\n';
  char buf[40];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace rsl
