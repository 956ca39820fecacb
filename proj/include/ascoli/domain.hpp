// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ascoli/errors.hpp"
#include "ascoli/types.hpp"

namespace ascoli {

enum class DomainKind { half_line, real_line, box_rn };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::half_line: return "half_line";
    case DomainKind::real_line: return "real_line";
    case DomainKind::box_rn: return "box_rn";
  }
  return "?";
}

/// An unbounded region of R^n together with a nested compact exhaustion by
/// norm balls D_k = {x in domain : ||x|| <= T_k}, T_1 < T_2 < ...  The radii
/// are the candidate truncation levels for everything downstream: quadrature
/// boxes, restricted sup-metrics, and extension-condition witnesses.
class Domain {
 public:
  Domain(DomainKind kind, int dim, std::vector<double> exhaustion_radii)
      : kind_(kind), dim_(dim), radii_(std::move(exhaustion_radii)) {
    if (kind_ != DomainKind::box_rn && dim_ != 1)
      throw InvalidArgument("half_line/real_line domains are one-dimensional");
    if (dim_ < 1 || dim_ > 3)
      throw InvalidArgument("domain dimension must be in {1, 2, 3}");
    if (radii_.empty()) throw InvalidArgument("exhaustion radii must be nonempty");
    double prev = 0.0;
    for (double r : radii_) {
      if (!(r > prev))
        throw InvalidArgument("exhaustion radii must be strictly increasing and positive");
      prev = r;
    }
  }

  static std::vector<double> default_radii() {
    std::vector<double> r;
    for (double t = 1.0; t <= 1024.0; t *= 2.0) r.push_back(t);
    return r;
  }

  static Domain half_line(std::vector<double> radii = default_radii()) {
    return Domain(DomainKind::half_line, 1, std::move(radii));
  }
  static Domain real_line(std::vector<double> radii = default_radii()) {
    return Domain(DomainKind::real_line, 1, std::move(radii));
  }
  static Domain box(int n, std::vector<double> radii = default_radii()) {
    return Domain(DomainKind::box_rn, n, std::move(radii));
  }

  DomainKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const std::vector<double>& exhaustion_radii() const noexcept { return radii_; }

  bool contains(const Point& x) const {
    if (x.size() != dim_) return false;
    if (kind_ == DomainKind::half_line) return x(0) >= 0.0;
    return true;
  }

  /// Axis interval kept when the domain is truncated at radius T.  The
  /// truncated region is the tensor product of this interval over all axes;
  /// it contains the norm ball of radius T, so a tail bound on the ball
  /// complement also bounds what the box omits.
  std::pair<double, double> truncated_axis(double T) const {
    if (!(T > 0.0)) throw InvalidArgument("truncation radius must be positive");
    if (kind_ == DomainKind::half_line) return {0.0, T};
    return {-T, T};
  }

  double truncated_volume(double T) const {
    auto [a, b] = truncated_axis(T);
    return std::pow(b - a, dim_);
  }

  bool operator==(const Domain& o) const {
    return kind_ == o.kind_ && dim_ == o.dim_ && radii_ == o.radii_;
  }

 private:
  DomainKind kind_;
  int dim_;
  std::vector<double> radii_;
};

}  // namespace ascoli
