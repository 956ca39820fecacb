// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ascoli/kernel_checks.hpp"
#include "ascoli/kernels.hpp"
#include "ascoli/operators.hpp"
#include "ascoli/quadrature.hpp"
#include "ascoli/sampled_function.hpp"

namespace ascoli {

/// Nystrom discretization output for the second-kind equation
/// f = g + lambda * T f.  `solution` holds the node values; `interpolant`
/// is the natural extension f(x) = g(x) + lambda * sum_j w_j K(x,y_j) f_j.
struct NystromResult {
  SampledFunction solution;
  double residual = 0.0;            // sup defect on a finer probe grid
  double condition_estimate = 0.0;  // one-norm estimate of I - lambda A
  std::vector<std::string> warnings;
  std::function<Vec(const Point&)> interpolant;
};

/// Solves f(x_i) = g(x_i) + lambda * sum_j w_j K(x_i, y_j) f(y_j) by dense
/// partial-pivoting factorization of the (d N) x (d N) system.
inline NystromResult solve_fredholm_2nd_kind(
    const LinearKernel& kernel, const std::function<Vec(const Point&)>& g,
    double lambda, const QuadraturePlan& plan, double cond_threshold = 1e12,
    int threads = 1) {
  const int d = kernel.value_dim;
  const std::size_t N = plan.node_count();
  if (N == 0) throw InvalidArgument("plan has no nodes");
  const Eigen::Index size = static_cast<Eigen::Index>(N) * d;

  Mat A = Mat::Zero(size, size);
  parallel_for(N, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < N; ++j) {
      A.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d,
              d, d) = plan.weights[j] * kernel(plan.nodes[i], plan.nodes[j]);
    }
  });
  if (!A.allFinite()) throw NumericError("Nystrom matrix has non-finite entries");

  Vec rhs(size);
  for (std::size_t i = 0; i < N; ++i) {
    Vec gi = g(plan.nodes[i]);
    if (gi.size() != d) throw InvalidArgument("right-hand side has wrong dimension");
    rhs.segment(static_cast<Eigen::Index>(i) * d, d) = gi;
  }

  Mat system = Mat::Identity(size, size) - lambda * A;
  Eigen::PartialPivLU<Mat> lu(system);
  const double rcond = lu.rcond();
  const double cond = (rcond > 0.0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!std::isfinite(cond) || cond > cond_threshold)
    throw LinearSolveError("Nystrom system is singular or too ill-conditioned", cond);
  Vec coef = lu.solve(rhs);
  if (!coef.allFinite()) throw NumericError("Nystrom solve produced non-finite values");

  // Node values as a sampled function; the per-axis node list of the plan
  // is strictly increasing, so the plan nodes form a tensor grid.
  std::vector<std::vector<double>> axes(plan.domain.dim());
  {
    auto rule = plan.axis_rule();
    for (int a = 0; a < plan.domain.dim(); ++a) axes[a] = rule.nodes;
  }
  std::vector<Vec> vals(N);
  for (std::size_t i = 0; i < N; ++i)
    vals[i] = coef.segment(static_cast<Eigen::Index>(i) * d, d);
  NystromResult res{SampledFunction(plan.domain, std::move(axes), std::move(vals)),
                    0.0, cond, {}, {}};

  auto interpolant = [kernel, g, lambda, plan, coef, d](const Point& x) -> Vec {
    Vec acc = g(x);
    for (std::size_t j = 0; j < plan.node_count(); ++j)
      acc += lambda * plan.weights[j] *
             (kernel(x, plan.nodes[j]) *
              coef.segment(static_cast<Eigen::Index>(j) * d, d));
    return acc;
  };
  res.interpolant = interpolant;

  if (kernel.car4_bound && std::abs(lambda) * *kernel.car4_bound >= 1.0)
    res.warnings.push_back("lambda * car4 >= 1: contraction not guaranteed");

  // Defect of the interpolant against a finer quadrature.
  {
    QuadraturePlan fine = build_plan(plan.domain, plan.truncation_radius,
                                     plan.panels_per_axis * 2);
    std::vector<double> defects(fine.node_count());
    parallel_for(fine.node_count(), threads, [&](std::size_t i) {
      const Point& x = fine.nodes[i];
      Vec lhs = interpolant(x);
      Vec quad = Vec::Zero(d);
      for (std::size_t j = 0; j < fine.node_count(); ++j)
        quad += fine.weights[j] * (kernel(x, fine.nodes[j]) * interpolant(fine.nodes[j]));
      defects[i] = (lhs - g(x) - lambda * quad).norm();
    });
    res.residual = *std::max_element(defects.begin(), defects.end());
  }
  return res;
}

/// Root scan for c * phi(t) = t on (0, search_max]: 1024 cells, sign-change
/// detection, 60 bisection steps per change.  `t_star` is the smallest root;
/// `roots` lists every sign change found.
struct RadiusScan {
  std::optional<double> t_star;
  std::vector<double> roots;
  std::string note;
  double certificate_gap = 0.0;  // |c * phi(t*) - t*|
};

inline RadiusScan hammerstein_radius(double c, const std::function<double(double)>& phi,
                                     double search_max) {
  if (c < 0.0) throw InvalidArgument("hammerstein_radius needs c >= 0");
  if (!(search_max > 0.0)) throw InvalidArgument("search_max must be positive");
  auto h = [&](double t) {
    const double p = phi(t);
    if (!std::isfinite(p)) throw NumericError("phi returned a non-finite value");
    return c * p - t;
  };
  RadiusScan scan;
  if (c == 0.0 || phi(search_max) == 0.0) {
    // c*phi is identically zero on the search range (phi is nondecreasing
    // and nonnegative), so the only crossing is the boundary t = 0.
    scan.note = "zero map, fixed point f == 0; no radius in (0, inf)";
    return scan;
  }
  const int cells = 1024;
  double prev_t = search_max / cells * 1e-9;  // stay off t = 0
  double prev_h = h(prev_t);
  for (int i = 1; i <= cells; ++i) {
    const double t = search_max * i / cells;
    const double ht = h(t);
    if (ht == 0.0 || (prev_h > 0.0) != (ht > 0.0)) {
      double lo = prev_t, hi = t;
      for (int step = 0; step < 60; ++step) {
        const double mid = 0.5 * (lo + hi);
        if ((h(mid) > 0.0) == (prev_h > 0.0))
          lo = mid;
        else
          hi = mid;
      }
      const double root = 0.5 * (lo + hi);
      if (scan.roots.empty() || root - scan.roots.back() > 1e-12 * search_max)
        scan.roots.push_back(root);
    }
    prev_t = t;
    prev_h = ht;
  }
  if (scan.roots.empty()) {
    scan.note = "no sign change of c * phi(t) - t on (0, search_max]";
    return scan;
  }
  scan.t_star = scan.roots.front();
  scan.certificate_gap = std::abs(c * phi(*scan.t_star) - *scan.t_star);
  if (scan.certificate_gap > 1e-12 * std::max(1.0, *scan.t_star))
    scan.note = "root found but |c*phi(t*) - t*| exceeds 1e-12 (steep crossing)";
  return scan;
}

/// K_M curve and invariant-ball radius for an Urysohn kernel: the smallest
/// M with K_M <= M, refined by bisection between the last failing and first
/// passing grid values.
struct RatioPoint {
  double M = 0.0;
  double K_M = 0.0;
  double ratio = 0.0;  // K_M / M
};

struct UrysohnRadiusResult {
  std::optional<double> R;
  std::vector<RatioPoint> curve;
  std::string note;
};

inline UrysohnRadiusResult urysohn_radius(const UrysohnKernel& k,
                                          const std::vector<double>& xs,
                                          const QuadraturePlan& plan,
                                          const std::vector<double>& M_grid,
                                          int u_samples = 128, int threads = 1) {
  if (M_grid.empty()) throw InvalidArgument("urysohn_radius needs an M grid");
  UrysohnRadiusResult res;
  auto K_of = [&](double M) {
    return estimate_K_M(k, M, xs, plan, u_samples, threads).sampled;
  };
  std::optional<double> last_fail;
  std::optional<double> first_pass;
  for (double M : M_grid) {
    const double KM = K_of(M);
    res.curve.push_back({M, KM, M > 0.0 ? KM / M : std::numeric_limits<double>::infinity()});
    if (!first_pass) {
      if (KM <= M)
        first_pass = M;
      else
        last_fail = M;
    }
  }
  if (!first_pass) {
    res.note = "K_M > M on the whole grid; limsup K_M / M may not be < 1";
    return res;
  }
  if (!last_fail) {
    res.R = *first_pass;  // already invariant at the smallest grid value
    return res;
  }
  double lo = *last_fail, hi = *first_pass;
  for (int step = 0; step < 40; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (K_of(mid) <= mid)
      hi = mid;
    else
      lo = mid;
  }
  res.R = hi;
  return res;
}

/// One damped Picard run: f_{k+1} = (1-alpha) f_k + alpha op(f_k).
/// Convergence is never guaranteed by the existence theory; a non-converged
/// report is an outcome, not an error.
struct FixedPointReport {
  double radius = 0.0;
  int iterations = 0;
  double alpha_initial = 0.5;
  double alpha_final = 0.5;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> iterate_norms;
  std::vector<double> residual_history;
  int ball_violations = 0;
  std::optional<SampledFunction> solution;
};

inline FixedPointReport picard_solve(
    const std::function<SampledFunction(const SampledFunction&)>& op,
    const SampledFunction& f0, double radius, double alpha, double tol,
    int max_iter, double ball_slack = 1e-6) {
  if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgument("alpha must be in (0, 1]");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (sup_norm(f0) > radius + ball_slack)
    throw InvalidArgument("initial iterate lies outside the ball");
  FixedPointReport rep;
  rep.radius = radius;
  rep.alpha_initial = alpha;
  SampledFunction f = f0;
  int grow_streak = 0;
  for (int k = 0; k <= max_iter; ++k) {
    rep.iterate_norms.push_back(sup_norm(f));
    SampledFunction Tf = op(f);
    for (std::size_t i = 0; i < Tf.size(); ++i)
      if (!Tf.value(i).allFinite())
        throw NumericError("non-finite iterate", "iteration " + std::to_string(k));
    const double r = sup_distance(Tf, f);
    rep.residual_history.push_back(r);
    rep.residual = r;
    rep.iterations = k;
    if (r <= tol) {
      rep.converged = true;
      rep.solution = Tf;
      break;
    }
    if (k == max_iter) {
      rep.solution = f;
      break;
    }
    if (rep.residual_history.size() >= 2 &&
        r > rep.residual_history[rep.residual_history.size() - 2]) {
      if (++grow_streak >= 5 && alpha > 1.0 / 32.0) {
        alpha = std::max(alpha / 2.0, 1.0 / 32.0);
        grow_streak = 0;
      }
    } else {
      grow_streak = 0;
    }
    f = blend(f, Tf, alpha);
    if (sup_norm(f) > radius + ball_slack) ++rep.ball_violations;
  }
  rep.alpha_final = alpha;
  return rep;
}

}  // namespace ascoli
