// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ascoli/domain.hpp"
#include "ascoli/errors.hpp"
#include "ascoli/types.hpp"

namespace ascoli {

namespace detail {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kGl8Nodes[8] = {
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
    -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
    0.79666647741362673959,  0.96028985649753623168};
inline constexpr double kGl8Weights[8] = {
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
    0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite GL8 rule on [a, b] with `panels` uniform panels, additionally
// split at the given interior coordinates, optionally clipped to [a, hi].
inline AxisRule make_axis_rule(double a, double b, int panels,
                               const std::vector<double>& splits,
                               std::optional<double> clip_hi = std::nullopt) {
  AxisRule rule;
  double hi = b;
  if (clip_hi) hi = std::min(hi, *clip_hi);
  if (!(hi > a)) return rule;  // empty axis
  std::vector<double> edges;
  edges.reserve(panels + 1 + splits.size());
  for (int p = 0; p <= panels; ++p)
    edges.push_back(a + (b - a) * (static_cast<double>(p) / panels));
  for (double s : splits)
    if (s > a && s < hi) edges.push_back(s);
  if (clip_hi) {
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](double e) { return e > hi; }),
                edges.end());
    edges.push_back(hi);
  }
  std::sort(edges.begin(), edges.end());
  const double tiny = 1e-14 * (b - a);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], up = edges[i + 1];
    if (up - lo <= tiny) continue;
    const double mid = 0.5 * (lo + up), half = 0.5 * (up - lo);
    for (int q = 0; q < 8; ++q) {
      rule.nodes.push_back(mid + half * kGl8Nodes[q]);
      rule.weights.push_back(half * kGl8Weights[q]);
    }
  }
  return rule;
}

inline void set_zero(double& x) { x = 0.0; }
inline void set_zero(Vec& v) { v.setZero(); }
inline void set_zero(Mat& m) { m.setZero(); }

// Tensor-product integration over per-axis rules; f maps Point -> double,
// Vec or Mat.  Node order is fixed, so results are bitwise reproducible.
template <class F>
auto tensor_integrate(const std::vector<AxisRule>& rules, F&& f,
                      const Point& shape_probe) {
  using R = std::decay_t<decltype(f(shape_probe))>;
  const int n = static_cast<int>(rules.size());
  for (const auto& r : rules) {
    if (r.nodes.empty()) {
      R zero = f(shape_probe);
      set_zero(zero);
      return zero;
    }
  }
  Point pt(n);
  bool first = true;
  R acc{};
  std::size_t idx[3] = {0, 0, 0};
  while (true) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      pt(a) = rules[a].nodes[idx[a]];
      w *= rules[a].weights[idx[a]];
    }
    R val = f(static_cast<const Point&>(pt));
    if (!all_finite(val))
      throw NumericError("integrand returned a non-finite value",
                         "node " + point_to_string(pt));
    if (first) {
      acc = w * val;
      first = false;
    } else {
      acc += w * val;
    }
    int a = n - 1;
    while (a >= 0) {
      if (++idx[a] < rules[a].nodes.size()) break;
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return acc;
}

}  // namespace detail

/// Truncation radius + node/weight set for integrals over an unbounded
/// domain.  Nodes cover the truncated box domain ∩ [-T, T]^n ([0, T] on the
/// half line) with a composite 8-point Gauss-Legendre rule per axis;
/// `tail_bound` is a caller-supplied certified bound on the integral of the
/// relevant dominating function over the omitted region.  Immutable.
struct QuadraturePlan {
  Domain domain = Domain::real_line();
  double truncation_radius = 0.0;
  int panels_per_axis = 0;
  std::vector<Point> nodes;      // tensor order, axis 0 most significant
  std::vector<double> weights;
  double tail_bound = 0.0;

  std::size_t node_count() const noexcept { return nodes.size(); }

  QuadraturePlan attach_tail_bound(double bound) const {
    if (bound < 0.0) throw InvalidArgument("tail bound must be nonnegative");
    QuadraturePlan p(*this);
    p.tail_bound = bound;
    return p;
  }

  detail::AxisRule axis_rule(const std::vector<double>& splits = {},
                             std::optional<double> clip_hi = std::nullopt) const {
    auto [a, b] = domain.truncated_axis(truncation_radius);
    return detail::make_axis_rule(a, b, panels_per_axis, splits, clip_hi);
  }
};

inline QuadraturePlan build_plan(const Domain& domain, double T, int panels_per_axis) {
  if (!(T > 0.0)) throw InvalidArgument("truncation radius must be positive");
  if (panels_per_axis < 1) throw InvalidArgument("panels_per_axis must be >= 1");
  QuadraturePlan plan;
  plan.domain = domain;
  plan.truncation_radius = T;
  plan.panels_per_axis = panels_per_axis;
  auto rule = plan.axis_rule();
  const int n = domain.dim();
  std::size_t count = 1;
  for (int a = 0; a < n; ++a) count *= rule.nodes.size();
  plan.nodes.reserve(count);
  plan.weights.reserve(count);
  std::size_t idx[3] = {0, 0, 0};
  for (std::size_t i = 0; i < count; ++i) {
    Point p(n);
    double w = 1.0;
    std::size_t rest = i;
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = rest % rule.nodes.size();
      rest /= rule.nodes.size();
    }
    for (int a = 0; a < n; ++a) {
      p(a) = rule.nodes[idx[a]];
      w *= rule.weights[idx[a]];
    }
    plan.nodes.push_back(std::move(p));
    plan.weights.push_back(w);
  }
  double wsum = 0.0;
  for (double w : plan.weights) wsum += w;
  const double vol = domain.truncated_volume(T);
  if (std::abs(wsum - vol) > 1e-12 * vol)
    throw NumericError("quadrature weights do not sum to the truncated volume");
  return plan;
}

/// Weighted node sum.  Does NOT add plan.tail_bound; callers combine the
/// tail explicitly.  The integrand must be pure; evaluation order is fixed.
template <class F>
auto integrate(const QuadraturePlan& plan, F&& f) {
  using R = std::decay_t<decltype(f(plan.nodes.front()))>;
  if (plan.nodes.empty()) throw InvalidArgument("plan has no nodes");
  bool first = true;
  R acc{};
  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    R val = f(plan.nodes[i]);
    if (!all_finite(val))
      throw NumericError("integrand returned a non-finite value",
                         "node " + point_to_string(plan.nodes[i]));
    if (first) {
      acc = plan.weights[i] * val;
      first = false;
    } else {
      acc += plan.weights[i] * val;
    }
  }
  return acc;
}

/// Same rule but with panels additionally split at the given per-axis
/// coordinates (kink locations of the integrand).  `axis_splits` is either
/// empty or one coordinate list per axis.
template <class F>
auto integrate(const QuadraturePlan& plan, F&& f,
               const std::vector<std::vector<double>>& axis_splits) {
  const int n = plan.domain.dim();
  if (!axis_splits.empty() && static_cast<int>(axis_splits.size()) != n)
    throw InvalidArgument("axis_splits must have one entry per axis");
  std::vector<detail::AxisRule> rules(n);
  static const std::vector<double> none;
  for (int a = 0; a < n; ++a)
    rules[a] = plan.axis_rule(axis_splits.empty() ? none : axis_splits[a]);
  return detail::tensor_integrate(rules, std::forward<F>(f), plan.nodes.front());
}

/// Integral over {y : y_k <= upper_k for all k} ∩ truncated box.  Panels
/// straddling a boundary hyperplane are subdivided at it, not weighted.
template <class F>
auto integrate_lower_region(const QuadraturePlan& plan, F&& f, const Point& upper,
                            const std::vector<std::vector<double>>& axis_splits = {}) {
  const int n = plan.domain.dim();
  if (upper.size() != n) throw InvalidArgument("upper corner dimension mismatch");
  if (!axis_splits.empty() && static_cast<int>(axis_splits.size()) != n)
    throw InvalidArgument("axis_splits must have one entry per axis");
  std::vector<detail::AxisRule> rules(n);
  static const std::vector<double> none;
  for (int a = 0; a < n; ++a)
    rules[a] = plan.axis_rule(axis_splits.empty() ? none : axis_splits[a], upper(a));
  return detail::tensor_integrate(rules, std::forward<F>(f), plan.nodes.front());
}

/// Smallest T in the doubling sequence {1, 2, 4, ...} with tail(T) <= eps,
/// refined by 20 bisection steps between the last failing and the first
/// passing radius.  The returned T satisfies tail(T) <= eps (post-checked).
/// The tail must be nonincreasing in T (caller's contract).
inline double find_truncation_radius(const std::function<double(double)>& tail,
                                     double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  auto eval = [&](double T) {
    double v = tail(T);
    if (!std::isfinite(v))
      throw NumericError("tail function returned a non-finite value",
                         "T = " + std::to_string(T));
    return v;
  };
  double lo = 0.0, hi = 0.0, best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double T = 1.0; T <= 1099511627776.0 /* 2^40 */; T *= 2.0) {
    double v = eval(T);
    best = std::min(best, v);
    if (v <= eps) {
      hi = T;
      found = true;
      break;
    }
    lo = T;
  }
  if (!found)
    throw NoConvergence(
        "tail stayed above eps for every radius up to 2^40; "
        "the kernel likely violates the tail condition",
        best);
  if (lo > 0.0) {
    for (int step = 0; step < 20; ++step) {
      double mid = 0.5 * (lo + hi);
      if (eval(mid) <= eps)
        hi = mid;
      else
        lo = mid;
    }
  }
  if (!(eval(hi) <= eps))
    throw NumericError("truncation radius post-check failed (tail not nonincreasing?)");
  return hi;
}

template <class R>
struct RefineResult {
  R value;
  double error_estimate = 0.0;
  int panels = 0;
};

namespace detail {
inline double change_norm(double a, double b) { return std::abs(a - b); }
inline double change_norm(const Vec& a, const Vec& b) { return (a - b).norm(); }
inline double change_norm(const Mat& a, const Mat& b) { return (a - b).norm(); }
inline double scalar_summary(double v) { return v; }
inline double scalar_summary(const Vec& v) { return v.norm(); }
inline double scalar_summary(const Mat& v) { return v.norm(); }
}  // namespace detail

/// Doubles panels_per_axis until successive values differ by < tol in norm;
/// caps at 2^12 panels per axis.
template <class F>
auto refine_until(const Domain& domain, double T, F&& f, double tol,
                  const std::vector<std::vector<double>>& axis_splits = {}) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  using R = std::decay_t<decltype(f(std::declval<const Point&>()))>;
  RefineResult<R> res;
  bool have_prev = false;
  R prev{};
  for (int panels = 1; panels <= 4096; panels *= 2) {
    R cur = integrate(build_plan(domain, T, panels), f, axis_splits);
    if (have_prev) {
      double diff = detail::change_norm(cur, prev);
      if (diff < tol) {
        res.value = cur;
        res.error_estimate = diff;
        res.panels = panels;
        return res;
      }
    }
    prev = cur;
    have_prev = true;
  }
  throw NoConvergence("refine_until hit the 2^12 panel cap without meeting tol",
                      detail::scalar_summary(prev));
}

}  // namespace ascoli
