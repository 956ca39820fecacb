// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ascoli/domain.hpp"
#include "ascoli/errors.hpp"
#include "ascoli/types.hpp"

namespace ascoli {

namespace detail {

// Shortest text that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char tryb[32];
      std::snprintf(tryb, sizeof(tryb), "%.*g", prec, v);
      if (std::strtod(tryb, nullptr) == v) return tryb;
    }
  }
  return buf;
}

}  // namespace detail

/// Values of a function X -> R^d on a finite tensor grid, with piecewise
/// multilinear interpolation between grid points and constant extension
/// beyond the outermost ones.  Grid points are ordered lexicographically
/// (axis 0 most significant).  Immutable after construction.
class SampledFunction {
 public:
  SampledFunction(Domain domain, std::vector<std::vector<double>> axes,
                  std::vector<Vec> values)
      : domain_(std::move(domain)), axes_(std::move(axes)), values_(std::move(values)) {
    if (static_cast<int>(axes_.size()) != domain_.dim())
      throw InvalidArgument("axis count must equal the domain dimension");
    std::size_t expect = 1;
    for (const auto& ax : axes_) {
      if (ax.empty()) throw InvalidArgument("grid axis must be nonempty");
      for (std::size_t i = 0; i + 1 < ax.size(); ++i)
        if (!(ax[i] < ax[i + 1]))
          throw InvalidArgument("grid axis coordinates must be strictly increasing");
      expect *= ax.size();
    }
    if (domain_.kind() == DomainKind::half_line && axes_[0].front() < 0.0)
      throw DomainError("half_line grid contains a negative coordinate");
    if (values_.size() != expect)
      throw InvalidArgument("value count must match the grid point count");
    if (values_.empty()) throw InvalidArgument("sampled function needs at least one grid point");
    const Eigen::Index d = values_.front().size();
    if (d < 1) throw InvalidArgument("value dimension must be >= 1");
    for (const Vec& v : values_) {
      if (v.size() != d) throw InvalidArgument("all values must share one dimension");
      if (!v.allFinite()) throw NumericError("sampled value is not finite");
    }
  }

  static SampledFunction constant(const Domain& domain,
                                  std::vector<std::vector<double>> axes, const Vec& c) {
    std::size_t count = 1;
    for (const auto& ax : axes) count *= ax.size();
    return SampledFunction(domain, std::move(axes), std::vector<Vec>(count, c));
  }

  template <class F>
  static SampledFunction sample(const Domain& domain,
                                std::vector<std::vector<double>> axes, F&& fn) {
    std::size_t count = 1;
    for (const auto& ax : axes) count *= ax.size();
    SampledFunction shape(domain, axes, std::vector<Vec>(count, vec1(0.0)));
    std::vector<Vec> vals(count);
    for (std::size_t i = 0; i < count; ++i) vals[i] = fn(shape.grid_point(i));
    return SampledFunction(domain, std::move(axes), std::move(vals));
  }

  const Domain& domain() const noexcept { return domain_; }
  int dim() const noexcept { return domain_.dim(); }
  int value_dim() const noexcept { return static_cast<int>(values_.front().size()); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }
  const std::vector<Vec>& values() const noexcept { return values_; }
  const Vec& value(std::size_t flat) const { return values_.at(flat); }

  Point grid_point(std::size_t flat) const {
    Point p(dim());
    std::size_t rest = flat;
    for (int a = dim() - 1; a >= 0; --a) {
      const auto& ax = axes_[a];
      p(a) = ax[rest % ax.size()];
      rest /= ax.size();
    }
    return p;
  }

  bool same_grid(const SampledFunction& o) const {
    return domain_ == o.domain_ && axes_ == o.axes_;
  }

  /// Multilinear interpolation; coordinates beyond the outermost grid points
  /// are clamped (constant extension).  Evaluation at a grid point returns
  /// the stored value exactly.
  Vec eval(const Point& x) const {
    if (x.size() != dim()) throw InvalidArgument("point dimension mismatch in eval");
    if (!domain_.contains(x))
      throw DomainError("point " + point_to_string(x) + " is outside the domain");
    int cell[3] = {0, 0, 0};
    double w[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim(); ++a) {
      const auto& ax = axes_[a];
      double t = std::clamp(x(a), ax.front(), ax.back());
      if (ax.size() == 1) {
        cell[a] = 0;
        w[a] = 0.0;
        continue;
      }
      auto it = std::upper_bound(ax.begin(), ax.end(), t);
      int hi = static_cast<int>(it - ax.begin());
      int lo = std::clamp(hi - 1, 0, static_cast<int>(ax.size()) - 2);
      cell[a] = lo;
      w[a] = (t - ax[lo]) / (ax[lo + 1] - ax[lo]);
    }
    Vec acc = Vec::Zero(value_dim());
    const int corners = 1 << dim();
    for (int c = 0; c < corners; ++c) {
      double weight = 1.0;
      std::size_t flat = 0;
      for (int a = 0; a < dim(); ++a) {
        const bool up = (c >> a) & 1;
        const auto& ax = axes_[a];
        int idx = cell[a] + (up ? 1 : 0);
        if (ax.size() == 1) {
          if (up) {
            weight = 0.0;
            break;
          }
          idx = 0;
        } else {
          weight *= up ? w[a] : (1.0 - w[a]);
        }
        flat = flat * ax.size() + static_cast<std::size_t>(idx);
      }
      if (weight != 0.0) acc += weight * values_[flat];
    }
    return acc;
  }

  /// CSV with header `x1,...,xn,v1,...,vd`, one row per grid point in
  /// lexicographic order, '.' decimal separator.
  void write_csv(std::ostream& os) const {
    for (int a = 0; a < dim(); ++a) os << "x" << (a + 1) << ",";
    for (int k = 0; k < value_dim(); ++k) os << "v" << (k + 1) << (k + 1 < value_dim() ? "," : "");
    os << "\n";
    for (std::size_t i = 0; i < size(); ++i) {
      Point p = grid_point(i);
      for (int a = 0; a < dim(); ++a) os << detail::format_double(p(a)) << ",";
      const Vec& v = values_[i];
      for (int k = 0; k < value_dim(); ++k)
        os << detail::format_double(v(k)) << (k + 1 < value_dim() ? "," : "");
      os << "\n";
    }
  }

  static SampledFunction read_csv(std::istream& is, const Domain& domain) {
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) throw ParseError("empty CSV", 1);
    ++lineno;
    auto cols = split_csv(line);
    int n = 0, d = 0;
    for (const auto& c : cols) {
      if (c.size() > 1 && c[0] == 'x') ++n;
      else if (c.size() > 1 && c[0] == 'v') ++d;
      else throw ParseError("unexpected CSV column '" + c + "'", lineno);
    }
    if (n != domain.dim()) throw ParseError("CSV coordinate count does not match domain", lineno);
    if (d < 1) throw ParseError("CSV has no value columns", lineno);

    std::vector<Point> pts;
    std::vector<Vec> raw;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto fields = split_csv(line);
      if (static_cast<int>(fields.size()) != n + d)
        throw ParseError("expected " + std::to_string(n + d) + " fields", lineno);
      Point p(n);
      Vec v(d);
      for (int a = 0; a < n; ++a) p(a) = parse_double(fields[a], lineno);
      for (int k = 0; k < d; ++k) v(k) = parse_double(fields[n + k], lineno);
      pts.push_back(p);
      raw.push_back(v);
    }
    if (pts.empty()) throw ParseError("CSV contains no data rows", lineno);

    std::vector<std::vector<double>> axes(n);
    for (int a = 0; a < n; ++a) {
      for (const Point& p : pts) axes[a].push_back(p(a));
      std::sort(axes[a].begin(), axes[a].end());
      axes[a].erase(std::unique(axes[a].begin(), axes[a].end()), axes[a].end());
    }
    std::size_t count = 1;
    for (const auto& ax : axes) count *= ax.size();
    if (count != pts.size())
      throw ParseError("CSV rows do not form a full tensor grid", lineno);
    std::vector<Vec> vals(count);
    std::vector<bool> seen(count, false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::size_t flat = 0;
      for (int a = 0; a < n; ++a) {
        const auto& ax = axes[a];
        auto it = std::lower_bound(ax.begin(), ax.end(), pts[i](a));
        flat = flat * ax.size() + static_cast<std::size_t>(it - ax.begin());
      }
      if (seen[flat]) throw ParseError("duplicate grid point in CSV", lineno);
      seen[flat] = true;
      vals[flat] = raw[i];
    }
    return SampledFunction(domain, std::move(axes), std::move(vals));
  }

 private:
  static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    out.push_back(cur);
    return out;
  }

  static double parse_double(const std::string& s, int lineno) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw ParseError("cannot parse number '" + s + "'", lineno);
    return v;
  }

  Domain domain_;
  std::vector<std::vector<double>> axes_;
  std::vector<Vec> values_;
};

/// Grid sup of the Euclidean value norm.  This is a lower estimate of the
/// true sup over X; reports label it "grid sup".
inline double sup_norm(const SampledFunction& f) {
  double m = 0.0;
  for (const Vec& v : f.values()) m = std::max(m, v.norm());
  return m;
}

/// Restricted sup-metric: max over grid points with ||x|| <= radius (all
/// points when radius is empty) of ||f(x) - g(x)||.  When no grid point
/// lies within the radius the result is 0 and *no_point_within_radius is
/// set when provided.
inline double sup_distance(const SampledFunction& f, const SampledFunction& g,
                           std::optional<double> radius = std::nullopt,
                           bool* no_point_within_radius = nullptr) {
  if (!f.same_grid(g)) throw InvalidArgument("sup_distance requires a shared grid");
  if (f.value_dim() != g.value_dim())
    throw InvalidArgument("sup_distance requires equal value dimensions");
  if (no_point_within_radius) *no_point_within_radius = false;
  double m = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (radius && f.grid_point(i).norm() > *radius) continue;
    any = true;
    m = std::max(m, (f.value(i) - g.value(i)).norm());
  }
  if (!any && no_point_within_radius) *no_point_within_radius = true;
  return any ? m : 0.0;
}

/// (1-alpha) * f + alpha * g on the shared grid.
inline SampledFunction blend(const SampledFunction& f, const SampledFunction& g,
                             double alpha) {
  if (!f.same_grid(g)) throw InvalidArgument("blend requires a shared grid");
  std::vector<Vec> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    vals[i] = (1.0 - alpha) * f.value(i) + alpha * g.value(i);
  return SampledFunction(f.domain(), f.axes(), std::move(vals));
}

}  // namespace ascoli
