// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ascoli/kernels.hpp"
#include "ascoli/parallel.hpp"
#include "ascoli/quadrature.hpp"
#include "ascoli/rng.hpp"

namespace ascoli {

/// Deterministic unit-direction set used to realize "sup over ||v|| = 1"
/// as a finite grid sup: {-1, +1} for n = 1, 64 equally spaced angles for
/// n = 2, a 162-point Fibonacci sphere sample for n = 3.
inline std::vector<Point> unit_directions(int n) {
  std::vector<Point> dirs;
  if (n == 1) {
    dirs.push_back(point1(1.0));
    dirs.push_back(point1(-1.0));
  } else if (n == 2) {
    for (int i = 0; i < 64; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 64.0;
      Point v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const int count = 162;
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * i;
      Point v(3);
      v << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(v);
    }
  } else {
    throw InvalidArgument("unit_directions supports n in {1,2,3}");
  }
  return dirs;
}

/// Deterministic sample of the closed ball {||u|| <= M} in R^d: equally
/// spaced on [-M, M] for d = 1 (endpoints included), radially
/// equidistributed pseudorandom directions otherwise (fixed seed).
inline std::vector<Vec> ball_samples(int d, double M, int count) {
  if (d < 1) throw InvalidArgument("ball_samples: d >= 1");
  if (count < 2) throw InvalidArgument("ball_samples: count >= 2");
  std::vector<Vec> out;
  out.reserve(count);
  if (d == 1) {
    for (int i = 0; i < count; ++i)
      out.push_back(vec1(-M + 2.0 * M * i / (count - 1)));
    return out;
  }
  Rng rng(0x5eedba11u);
  for (int i = 0; i < count; ++i) {
    Vec dir(d);
    double norm2 = 0.0;
    do {
      for (int k = 0; k < d; ++k) dir(k) = rng.normal();
      norm2 = dir.squaredNorm();
    } while (norm2 == 0.0);
    const double r = M * std::pow(static_cast<double>(i) / (count - 1), 1.0 / d);
    out.push_back(r / std::sqrt(norm2) * dir);
  }
  return out;
}

/// Grid sup estimate of the uniform integral bound: max over the probe set
/// of the integral of ||K(x, .)|| over the truncated region, plus the
/// plan's certified tail bound.
inline double check_car4(const LinearKernel& k, const std::vector<Point>& xs,
                         const QuadraturePlan& plan, int threads = 1) {
  if (xs.empty()) throw InvalidArgument("check_car4 needs a nonempty probe set");
  std::vector<double> vals(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const Point& x = xs[i];
    vals[i] = integrate(
        plan, [&](const Point& y) { return operator_norm(k(x, y)); }, k.splits_at(x));
  });
  return *std::max_element(vals.begin(), vals.end()) + plan.tail_bound;
}

struct DirectionOutcome {
  Point v;
  double t_radius = 0.0;  // certified T_v (meaningful when ok)
  bool ok = false;
  std::string note;
};

struct ConditionReport {
  std::string condition;  // "K1" or "K2"
  double eps = 0.0;
  std::vector<DirectionOutcome> directions;
  double sup_radius = 0.0;  // max certified T_v; the finite grid sup
  bool certified = false;

  void finish() {
    certified = !directions.empty();
    sup_radius = 0.0;
    for (const auto& d : directions) {
      certified = certified && d.ok;
      if (d.ok) sup_radius = std::max(sup_radius, d.t_radius);
    }
  }
};

namespace detail {

inline double difference_integral(const LinearKernel& k, const Point& xa,
                                  const Point& xb, const QuadraturePlan& plan) {
  auto splits = merge_splits(k.splits_at(xa), k.splits_at(xb));
  return integrate(
      plan,
      [&](const Point& y) { return operator_norm(k(xa, y) - k(xb, y)); },
      splits);
}

}  // namespace detail

/// Cauchy-type decay of kernel differences along rays: for each direction v,
/// searches for T_v such that the integral of ||K(tv,y) - K(sv,y)|| stays
/// below eps for probe pairs t, s in {T_v, 2T_v, 4T_v, 8T_v}.  The omitted
/// tail is covered by twice the plan's tail bound.
inline ConditionReport check_k2(const LinearKernel& k, double eps,
                                const std::vector<Point>& directions,
                                const QuadraturePlan& plan, int threads = 1) {
  if (directions.empty()) throw InvalidArgument("check_k2 needs directions");
  if (!(eps > 0.0)) throw InvalidArgument("check_k2 needs eps > 0");
  ConditionReport rep;
  rep.condition = "K2";
  rep.eps = eps;
  rep.directions.resize(directions.size());
  parallel_for(directions.size(), threads, [&](std::size_t i) {
    const Point& v = directions[i];
    DirectionOutcome& out = rep.directions[i];
    out.v = v;
    auto probe_tail = [&](double T) {
      const double probes[4] = {T, 2.0 * T, 4.0 * T, 8.0 * T};
      double worst = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          worst = std::max(worst, detail::difference_integral(
                                      k, probes[a] * v, probes[b] * v, plan));
      return worst + 2.0 * plan.tail_bound;
    };
    try {
      out.t_radius = find_truncation_radius(probe_tail, eps);
      out.ok = true;
    } catch (const NoConvergence& e) {
      out.ok = false;
      out.note = e.what();
    }
  });
  rep.finish();
  return rep;
}

/// Certifies the declared radial limit: for each direction v, finds T_v with
/// the integral of ||K(T_v v, y) - L_v(y)|| below eps and re-checks the probe
/// radii {T_v, 2T_v, 4T_v}.
inline ConditionReport check_k1_via_limit(const LinearKernel& k, double eps,
                                          const std::vector<Point>& directions,
                                          const QuadraturePlan& plan,
                                          int threads = 1) {
  if (!k.radial_limit)
    throw Unsupported("kernel declares no radial limit; use check_k2 instead");
  if (directions.empty()) throw InvalidArgument("check_k1_via_limit needs directions");
  if (!(eps > 0.0)) throw InvalidArgument("check_k1_via_limit needs eps > 0");
  ConditionReport rep;
  rep.condition = "K1";
  rep.eps = eps;
  rep.directions.resize(directions.size());
  const double far_t = 1048576.0;  // proxy radius for the limit's kink locus
  parallel_for(directions.size(), threads, [&](std::size_t i) {
    const Point& v = directions[i];
    DirectionOutcome& out = rep.directions[i];
    out.v = v;
    auto limit_gap = [&](double t) {
      auto splits = merge_splits(k.splits_at(t * v), k.splits_at(far_t * v));
      return integrate(
                 plan,
                 [&](const Point& y) {
                   return operator_norm(k(t * v, y) - k.radial_limit(v, y));
                 },
                 splits) +
             2.0 * plan.tail_bound;
    };
    try {
      const double T = find_truncation_radius(limit_gap, eps);
      out.t_radius = T;
      out.ok = true;
      for (double t : {T, 2.0 * T, 4.0 * T}) {
        if (limit_gap(t) > eps) {
          out.ok = false;
          out.note = "limit gap re-grows at t = " + std::to_string(t);
          break;
        }
      }
    } catch (const NoConvergence& e) {
      out.ok = false;
      out.note = e.what();
    }
  });
  rep.finish();
  return rep;
}

/// Estimate of K_M = sup_x of the integral of sup_{||u|| <= M} ||K(x,y,u)||.
/// `sampled` is the primary estimate (deterministic ball samples for the
/// inner sup); `envelope_based` integrates the declared envelope as a
/// cross-check.  Both include the declared envelope tail.
struct KMEstimate {
  double sampled = 0.0;
  double envelope_based = 0.0;
  double tail = 0.0;
  bool gap_flagged = false;  // envelope exceeds sampled by more than 10%
};

inline KMEstimate estimate_K_M(const UrysohnKernel& k, double M,
                               const std::vector<double>& xs,
                               const QuadraturePlan& plan, int u_samples = 128,
                               int threads = 1) {
  if (M < 0.0) throw InvalidArgument("estimate_K_M needs M >= 0");
  if (xs.empty()) throw InvalidArgument("estimate_K_M needs probe points");
  if (plan.domain.kind() != DomainKind::half_line)
    throw InvalidArgument("Urysohn kernels live on the half line");
  const auto samples =
      (M == 0.0) ? std::vector<Vec>{Vec::Zero(k.value_dim)}
                 : ball_samples(k.value_dim, M, u_samples);
  KMEstimate est;
  std::vector<double> vals(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const double x = xs[i];
    vals[i] = integrate(plan, [&](const Point& y) {
      double worst = 0.0;
      for (const Vec& u : samples)
        worst = std::max(worst, k.eval(x, y(0), u).norm());
      return worst;
    });
  });
  double inner = *std::max_element(vals.begin(), vals.end());
  if (k.envelope_tail) {
    est.tail = k.envelope_tail(plan.truncation_radius, M);
  } else {
    // No declared envelope: probe growth under truncation refinement.
    const double T = plan.truncation_radius;
    auto value_at = [&](double TT) {
      auto p = build_plan(plan.domain, TT, plan.panels_per_axis);
      double worst = 0.0;
      for (double x : xs) {
        double v = integrate(p, [&](const Point& y) {
          double w = 0.0;
          for (const Vec& u : samples) w = std::max(w, k.eval(x, y(0), u).norm());
          return w;
        });
        worst = std::max(worst, v);
      }
      return worst;
    };
    const double v2 = value_at(2.0 * T), v4 = value_at(4.0 * T);
    if (v4 - v2 > std::max(1e-12, 0.01 * v4))
      throw NoConvergence(
          "no envelope declared and the sampled sup keeps growing under "
          "truncation refinement",
          v4);
    inner = std::max(inner, v4);
  }
  est.sampled = inner + est.tail;
  if (k.envelope) {
    est.envelope_based =
        integrate(plan, [&](const Point& y) { return k.envelope(y(0), M); }) +
        est.tail;
    est.gap_flagged = est.envelope_based > 1.1 * est.sampled;
  }
  return est;
}

/// Outcome of the asymptotic-independence audit for an Urysohn kernel.
struct ConditionBReport {
  bool certified = false;
  double T = 0.0;            // certified truncation radius (when certified)
  double checked_tail = 0.0; // post-checked tail value at T
  double far_horizon = 0.0;
  std::string note;
};

/// Searches for the smallest T such that the integral over y in [T, T_far]
/// of ||K(x,y,u) - b(x,y)|| (sup over probe x and sampled ||u|| <= M) plus
/// the declared difference tail beyond T_far stays below eps.  The declared
/// tail is spot-checked against computed windows first; an inconsistent
/// declaration fails certification rather than producing a bogus radius.
inline ConditionBReport check_condition_B(const UrysohnKernel& k, double eps,
                                          double M, const std::vector<double>& xs,
                                          int u_samples = 128) {
  if (!(eps > 0.0)) throw InvalidArgument("check_condition_B needs eps > 0");
  if (M < 0.0) throw InvalidArgument("check_condition_B needs M >= 0");
  if (xs.empty()) throw InvalidArgument("check_condition_B needs probe points");
  if (!k.asymptote) throw Unsupported("kernel declares no asymptote b(x,y)");
  ConditionBReport rep;
  auto declared_tail = [&](double T) {
    if (k.asymptote_tail) return k.asymptote_tail(T, M);
    if (k.envelope_tail)
      // ||K - b|| <= ||K|| + ||b|| with ||b|| <= envelope(.,0) + envelope(.,M).
      return 2.0 * k.envelope_tail(T, M) + k.envelope_tail(T, 0.0);
    throw Unsupported("kernel declares neither asymptote_tail nor envelope_tail");
  };
  const auto samples = (M == 0.0) ? std::vector<Vec>{Vec::Zero(k.value_dim)}
                                  : ball_samples(k.value_dim, M, u_samples);
  auto window = [&](double lo, double hi) {
    if (hi <= lo) return 0.0;
    const int panels = std::clamp(static_cast<int>(std::ceil(2.0 * (hi - lo))), 8, 512);
    auto rule = detail::make_axis_rule(lo, hi, panels, {});
    double worst = 0.0;
    for (double x : xs) {
      for (const Vec& u : samples) {
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double y = rule.nodes[q];
          acc += rule.weights[q] * (k.eval(x, y, u) - k.asymptote(x, y)).norm();
        }
        worst = std::max(worst, acc);
      }
    }
    return worst;
  };
  double t_far = 0.0;
  try {
    t_far = find_truncation_radius(declared_tail, 0.5 * eps);
  } catch (const NoConvergence&) {
    rep.note = "condition (B) not certified: declared tail never reaches eps/2";
    return rep;
  }
  rep.far_horizon = t_far;
  // Spot-check the declaration: computed windows must not exceed it.
  for (double probe : {1.0, 2.0, 4.0, 8.0}) {
    if (probe >= t_far) break;
    const double computed = window(probe, t_far);
    const double allowed = declared_tail(probe);
    if (computed > allowed + 1e-9 * (1.0 + allowed) + 1e-12) {
      rep.note =
          "condition (B) not certified: computed difference window " +
          std::to_string(computed) + " at T = " + std::to_string(probe) +
          " exceeds the declared tail " + std::to_string(allowed);
      return rep;
    }
  }
  auto tail_fn = [&](double T) { return window(T, t_far) + declared_tail(t_far); };
  try {
    rep.T = find_truncation_radius(tail_fn, eps);
    rep.checked_tail = tail_fn(rep.T);
    rep.certified = true;
  } catch (const NoConvergence& e) {
    rep.note = std::string("condition (B) not certified: ") + e.what();
  }
  return rep;
}

}  // namespace ascoli
