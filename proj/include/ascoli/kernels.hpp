// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ascoli/errors.hpp"
#include "ascoli/types.hpp"

namespace ascoli {

/// A linear kernel K : X x Y -> B(R^d), evaluable pointwise, carrying the
/// hypotheses the numerical checkers need as declared metadata.  Declared
/// metadata is spot-checked by the checkers, never assumed.
///
/// Measurability in y and continuity in x are declared contracts; they are
/// only probed by finite differences, never verified.
struct LinearKernel {
  int value_dim = 1;
  std::function<Mat(const Point& x, const Point& y)> eval;

  /// D with ||K(x,y)|| <= D(y) for every x in the declared window of
  /// interest, together with a nonincreasing bound on the integral of D
  /// over {||y|| > T}.
  std::function<double(const Point& y)> domination;
  std::function<double(double T)> domination_tail;

  /// Radial limit L_v(y) of K(tv, y) as t -> infinity, when one exists.
  std::function<Mat(const Point& v, const Point& y)> radial_limit;

  /// Declared value of sup_x of the integral of ||K(x, .)||, when known
  /// analytically.
  std::optional<double> car4_bound;

  /// Per-axis y-coordinates where y -> K(x,y) loses smoothness; quadrature
  /// panels are split there so the composite rule keeps its order.
  std::function<std::vector<std::vector<double>>(const Point& x)> kink_locus;

  Mat operator()(const Point& x, const Point& y) const { return eval(x, y); }

  std::vector<std::vector<double>> splits_at(const Point& x) const {
    if (!kink_locus) return {};
    return kink_locus(x);
  }
};

/// Merge per-axis split lists (each either empty or one list per axis).
inline std::vector<std::vector<double>> merge_splits(
    std::vector<std::vector<double>> a, const std::vector<std::vector<double>>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k)
    a[k].insert(a[k].end(), b[k].begin(), b[k].end());
  return a;
}

/// A nonlinear kernel K : R+ x R+ x R^d -> R^d for Urysohn operators.
/// `envelope(y, M)` bounds sup over ||u|| <= M of ||K(x,y,u)|| uniformly in
/// x, with `envelope_tail(T, M)` a nonincreasing bound on its integral over
/// y > T.  `asymptote` is the function b(x,y) that K approaches as the
/// influence of u dies out in y; `asymptote_tail(T, M)` is the declared
/// bound on the integral over y > T of sup_{||u|| <= M} ||K(x,y,u) - b(x,y)||,
/// uniform in x (the quantity the asymptotic-independence condition is
/// about).  All metadata is spot-checked where used.
struct UrysohnKernel {
  int value_dim = 1;
  std::function<Vec(double x, double y, const Vec& u)> eval;
  std::function<Vec(double x, double y)> asymptote;
  std::function<double(double y, double M)> envelope;
  std::function<double(double T, double M)> envelope_tail;
  std::function<double(double T, double M)> asymptote_tail;
  /// delta(eta) with |K(x1,y,u) - K(x2,y,u)| < eta whenever |x1-x2| < delta
  /// (y, u in the stated compacts); declared, used for reporting only.
  std::function<double(double eta)> uniform_modulus_x;
};

/// Superposition data F(y, z) with a nondecreasing growth envelope phi:
/// ||F(y,z)|| <= phi(||z||).  `modulus(z, eps)` realizes the declared
/// continuity-in-z modulus when provided.
struct Nonlinearity {
  int value_dim = 1;
  std::function<Vec(const Point& y, const Vec& z)> eval;
  std::function<double(double)> phi;
  std::function<double(const Vec& z, double eps)> modulus;
};

}  // namespace ascoli
