// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ascoli/kernel_checks.hpp"
#include "ascoli/kernel_library.hpp"
#include "ascoli/kernels.hpp"
#include "ascoli/parallel.hpp"
#include "ascoli/quadrature.hpp"
#include "ascoli/sampled_function.hpp"

namespace ascoli {

enum class OperatorKind { fredholm, hammerstein, urysohn, volterra };

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::fredholm: return "fredholm";
    case OperatorKind::hammerstein: return "hammerstein";
    case OperatorKind::urysohn: return "urysohn";
    case OperatorKind::volterra: return "volterra";
  }
  return "?";
}

/// Everything needed to apply one of the four integral operators: the
/// kernel, the quadrature plan over Y, the output grid on X, and the tail
/// budget eps_tail that application must certify against declared kernel
/// tails.  Immutable; applications over distinct output points run
/// independently and are assembled in grid order.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::fredholm;
  LinearKernel kernel;    // fredholm / hammerstein / volterra
  UrysohnKernel urysohn;  // urysohn
  std::optional<Nonlinearity> nonlinearity;  // required iff hammerstein
  Domain x_domain = Domain::real_line();
  std::vector<std::vector<double>> output_axes;
  QuadraturePlan plan;
  double eps_tail = 1e-8;
  int threads = 1;
};

namespace detail {

// Splits from the input function's own grid: the interpolant is only
// piecewise smooth, and its kinks sit exactly on the grid coordinates.
inline std::vector<std::vector<double>> function_splits(const SampledFunction& f) {
  std::vector<std::vector<double>> s(f.dim());
  for (int a = 0; a < f.dim(); ++a)
    if (f.axes()[a].size() > 1) s[a] = f.axes()[a];
  return s;
}

inline void require_kind(const OperatorSpec& spec, OperatorKind kind,
                         const char* op) {
  if (spec.kind != kind)
    throw InvalidArgument(std::string(op) + " called with a spec of kind " +
                          to_string(spec.kind));
}

inline void require_plan_domain(const QuadraturePlan& plan, const SampledFunction& f,
                                const char* op) {
  if (plan.domain.kind() != f.domain().kind() ||
      plan.domain.dim() != f.domain().dim())
    throw InvalidArgument(std::string(op) +
                          ": quadrature plan and input function live on "
                          "different domains");
}

inline void check_domination_tail(const LinearKernel& k, const QuadraturePlan& plan,
                                  double eps_tail, const char* op) {
  if (!k.domination_tail) return;
  const double tail = k.domination_tail(plan.truncation_radius);
  if (tail > eps_tail) {
    double required = plan.truncation_radius;
    try {
      required = find_truncation_radius(k.domination_tail, eps_tail);
    } catch (const NoConvergence&) {
    }
    throw TruncationInsufficient(
        std::string(op) + ": domination tail " + std::to_string(tail) +
            " beyond T = " + std::to_string(plan.truncation_radius) +
            " exceeds eps_tail = " + std::to_string(eps_tail),
        required);
  }
}

inline double car4_estimate(const LinearKernel& k,
                            const std::vector<Point>& out_points,
                            const QuadraturePlan& plan, int threads) {
  if (k.car4_bound) return *k.car4_bound;
  return check_car4(k, out_points, plan, threads);
}

inline std::vector<Point> grid_points(const SampledFunction& f) {
  std::vector<Point> pts(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) pts[i] = f.grid_point(i);
  return pts;
}

}  // namespace detail

/// (T f)(x) = integral of K(x,y) f(y) over the truncated Y region at every
/// output grid point.  Requires the declared domination tail beyond plan.T
/// to stay within eps_tail; asserts the uniform bound
/// sup_x ||(Tf)(x)|| <= ||f|| * car4_estimate on the grid.
inline SampledFunction apply_fredholm(const OperatorSpec& spec,
                                      const SampledFunction& f) {
  if (spec.kind != OperatorKind::fredholm && spec.kind != OperatorKind::hammerstein)
    throw InvalidArgument("apply_fredholm called with a spec of kind " +
                          std::string(to_string(spec.kind)));
  detail::check_domination_tail(spec.kernel, spec.plan, spec.eps_tail,
                                "apply_fredholm");
  detail::require_plan_domain(spec.plan, f, "apply_fredholm");
  const double fs = sup_norm(f);
  const auto f_splits = detail::function_splits(f);
  SampledFunction shape = SampledFunction::constant(
      spec.x_domain, spec.output_axes, Vec::Zero(spec.kernel.value_dim));
  std::vector<Vec> vals(shape.size());
  parallel_for(shape.size(), spec.threads, [&](std::size_t i) {
    const Point x = shape.grid_point(i);
    auto splits = merge_splits(spec.kernel.splits_at(x), f_splits);
    vals[i] = integrate(
        spec.plan, [&](const Point& y) -> Vec { return spec.kernel(x, y) * f.eval(y); },
        splits);
  });
  SampledFunction out(spec.x_domain, spec.output_axes, std::move(vals));
  const double bound =
      detail::car4_estimate(spec.kernel, detail::grid_points(out), spec.plan,
                            spec.threads) *
      fs;
  const double sup_out = sup_norm(out);
  if (sup_out > bound + spec.plan.tail_bound * fs + 1e-9 * (1.0 + bound))
    throw NumericError("Fredholm output " + std::to_string(sup_out) +
                       " violates the uniform bound " + std::to_string(bound));
  return out;
}

/// Pointwise substitution (N f)(y) = F(y, f(y)) on f's own grid.  Asserts
/// the declared growth envelope sup ||N f|| <= phi(sup ||f||).
inline SampledFunction apply_nemytskii(const Nonlinearity& F,
                                       const SampledFunction& f) {
  std::vector<Vec> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    vals[i] = F.eval(f.grid_point(i), f.value(i));
    if (!vals[i].allFinite())
      throw NumericError("nonlinearity returned a non-finite value",
                         "grid point " + point_to_string(f.grid_point(i)));
  }
  SampledFunction out(f.domain(), f.axes(), std::move(vals));
  if (F.phi) {
    const double cap = F.phi(sup_norm(f));
    if (sup_norm(out) > cap + 1e-12 * (1.0 + cap))
      throw NumericError("nonlinearity exceeds its declared growth envelope phi");
  }
  return out;
}

/// (H f) = Fredholm applied to the Nemytskii substitution; the composition
/// is the implementation.  Additionally asserts the phi-form bound
/// sup ||H f|| <= car4_estimate * phi(sup ||f||).
inline SampledFunction apply_hammerstein(const OperatorSpec& spec,
                                         const SampledFunction& f) {
  detail::require_kind(spec, OperatorKind::hammerstein, "apply_hammerstein");
  if (!spec.nonlinearity)
    throw InvalidArgument("hammerstein spec needs a nonlinearity");
  SampledFunction out = apply_fredholm(spec, apply_nemytskii(*spec.nonlinearity, f));
  if (spec.nonlinearity->phi) {
    const double bound =
        detail::car4_estimate(spec.kernel, detail::grid_points(out), spec.plan,
                              spec.threads) *
        spec.nonlinearity->phi(sup_norm(f));
    if (sup_norm(out) > bound + spec.plan.tail_bound + 1e-9 * (1.0 + bound))
      throw NumericError("Hammerstein output violates the phi-form bound");
  }
  return out;
}

/// (U f)(x) = integral over y >= 0 of K(x, y, f(y)).  The tail is controlled
/// through the declared envelope at level M = sup ||f||.
inline SampledFunction apply_urysohn(const OperatorSpec& spec,
                                     const SampledFunction& f) {
  detail::require_kind(spec, OperatorKind::urysohn, "apply_urysohn");
  if (spec.plan.domain.kind() != DomainKind::half_line)
    throw InvalidArgument("Urysohn operators integrate over the half line");
  detail::require_plan_domain(spec.plan, f, "apply_urysohn");
  const double M = sup_norm(f);
  if (spec.urysohn.envelope_tail) {
    const double tail = spec.urysohn.envelope_tail(spec.plan.truncation_radius, M);
    if (tail > spec.eps_tail) {
      double required = spec.plan.truncation_radius;
      try {
        required = find_truncation_radius(
            [&](double T) { return spec.urysohn.envelope_tail(T, M); },
            spec.eps_tail);
      } catch (const NoConvergence&) {
      }
      throw TruncationInsufficient(
          "apply_urysohn: envelope tail exceeds eps_tail", required);
    }
  }
  const auto f_splits = detail::function_splits(f);
  SampledFunction shape = SampledFunction::constant(
      spec.x_domain, spec.output_axes, Vec::Zero(spec.urysohn.value_dim));
  std::vector<Vec> vals(shape.size());
  parallel_for(shape.size(), spec.threads, [&](std::size_t i) {
    const double x = shape.grid_point(i)(0);
    vals[i] = integrate(
        spec.plan,
        [&](const Point& y) -> Vec { return spec.urysohn.eval(x, y(0), f.eval(y)); },
        f_splits);
  });
  return SampledFunction(spec.x_domain, spec.output_axes, std::move(vals));
}

/// (V f)(x) = integral of K(x,y) f(y) over {y : y_k <= x_k for all k}
/// intersected with the truncated region; panels straddling the boundary
/// are subdivided at it.
inline SampledFunction apply_volterra(const OperatorSpec& spec,
                                      const SampledFunction& f) {
  detail::require_kind(spec, OperatorKind::volterra, "apply_volterra");
  detail::check_domination_tail(spec.kernel, spec.plan, spec.eps_tail,
                                "apply_volterra");
  detail::require_plan_domain(spec.plan, f, "apply_volterra");
  const auto f_splits = detail::function_splits(f);
  SampledFunction shape = SampledFunction::constant(
      spec.x_domain, spec.output_axes, Vec::Zero(spec.kernel.value_dim));
  std::vector<Vec> vals(shape.size());
  parallel_for(shape.size(), spec.threads, [&](std::size_t i) {
    const Point x = shape.grid_point(i);
    auto splits = merge_splits(spec.kernel.splits_at(x), f_splits);
    vals[i] = integrate_lower_region(
        spec.plan, [&](const Point& y) -> Vec { return spec.kernel(x, y) * f.eval(y); },
        x, splits);
  });
  return SampledFunction(spec.x_domain, spec.output_axes, std::move(vals));
}

/// Measured and certified gap between the mollified-Fredholm approximation
/// and the Volterra operator for one f with sup ||f|| <= 1.  `bound` is the
/// strip integral sup_x over the boundary strip of width 1/m of ||K||, an
/// upper bound the measured gap may not exceed.
struct VolterraApproxResult {
  double measured = 0.0;
  double bound = 0.0;
};

inline VolterraApproxResult volterra_approx_error(const OperatorSpec& base_spec,
                                                  const SampledFunction& f, int m) {
  if (sup_norm(f) > 1.0 + 1e-12)
    throw InvalidArgument("volterra_approx_error expects sup ||f|| <= 1");
  const int n = base_spec.plan.domain.dim();
  OperatorSpec vspec = base_spec;
  vspec.kind = OperatorKind::volterra;
  SampledFunction vf = apply_volterra(vspec, f);

  OperatorSpec mspec = base_spec;
  mspec.kind = OperatorKind::fredholm;
  mspec.kernel = mollified_volterra(base_spec.kernel, m, n);
  SampledFunction fmf = apply_fredholm(mspec, f);

  VolterraApproxResult res;
  res.measured = sup_distance(fmf, vf);

  // Strip integral of ||K|| over prod_k (x_k, x_k + 1/m), maximized over the
  // output grid.
  const double width = 1.0 / m;
  for (std::size_t i = 0; i < vf.size(); ++i) {
    const Point x = vf.grid_point(i);
    std::vector<detail::AxisRule> rules(n);
    auto ksplits = base_spec.kernel.splits_at(x);
    for (int a = 0; a < n; ++a)
      rules[a] = detail::make_axis_rule(
          x(a), x(a) + width, 4, ksplits.empty() ? std::vector<double>{} : ksplits[a]);
    double strip = detail::tensor_integrate(
        rules,
        [&](const Point& y) { return operator_norm(base_spec.kernel(x, y)); },
        base_spec.plan.nodes.front());
    res.bound = std::max(res.bound, strip);
  }
  if (res.measured > res.bound + 1e-8)
    throw NumericError("measured Volterra approximation gap " +
                       std::to_string(res.measured) +
                       " exceeds the strip-integral bound " +
                       std::to_string(res.bound));
  return res;
}

}  // namespace ascoli
