// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <istream>
#include <memory>
#include <numbers>
#include <utility>

#include "ascoli/domain.hpp"
#include "ascoli/kernels.hpp"
#include "ascoli/sampled_function.hpp"

namespace ascoli {

/// Integral of e^{-||y||} over {||y|| > T} in R^n, n <= 3 (surface measure
/// times an incomplete-Gamma factor).
inline double exp_ball_tail(int n, double T) {
  const double e = std::exp(-T);
  switch (n) {
    case 1: return 2.0 * e;
    case 2: return 2.0 * std::numbers::pi * (1.0 + T) * e;
    case 3: return 4.0 * std::numbers::pi * (2.0 + 2.0 * T + T * T) * e;
    default: throw InvalidArgument("exp_ball_tail supports n in {1,2,3}");
  }
}

/// Integral of e^{-||y||} over all of R^n.
inline double exp_ball_total(int n) { return exp_ball_tail(n, 0.0); }

struct ExponentialFamilyOptions {
  std::function<Point(const Point&)> g;  // continuous map R^n -> R^n
  double g_sup = 0.0;                    // sup of ||g(x)|| over the x-window of interest
  std::function<Point(const Point&)> g_limit;  // optional: unit v -> lim of g(tv)
  double amplitude = 1.0;
  int dim = 1;
};

/// Scalar kernel family amplitude * e^{-||g(x) - y||} on R^n.  Domination
/// uses ||g(x) - y|| >= ||y|| - g_sup, so the declared tail is only valid
/// while x stays in the window that defines g_sup.
inline LinearKernel exponential_family(ExponentialFamilyOptions opt) {
  if (!opt.g) throw InvalidArgument("exponential_family requires g");
  if (opt.dim < 1 || opt.dim > 3) throw InvalidArgument("exponential_family: dim in {1,2,3}");
  if (!(opt.amplitude > 0.0)) throw InvalidArgument("exponential_family: amplitude > 0");
  LinearKernel k;
  k.value_dim = 1;
  const auto g = opt.g;
  const double amp = opt.amplitude;
  const double gs = opt.g_sup;
  const int n = opt.dim;
  k.eval = [g, amp](const Point& x, const Point& y) {
    return mat1(amp * std::exp(-(g(x) - y).norm()));
  };
  k.domination = [amp, gs](const Point& y) {
    return amp * std::exp(gs - y.norm());
  };
  k.domination_tail = [amp, gs, n](double T) {
    return amp * std::exp(gs) * exp_ball_tail(n, T);
  };
  k.car4_bound = amp * exp_ball_total(n);
  k.kink_locus = [g, n](const Point& x) {
    Point gx = g(x);
    std::vector<std::vector<double>> s(n);
    for (int a = 0; a < n; ++a) s[a] = {gx(a)};
    return s;
  };
  if (opt.g_limit) {
    const auto gl = opt.g_limit;
    k.radial_limit = [gl, amp](const Point& v, const Point& y) {
      return mat1(amp * std::exp(-(gl(v) - y).norm()));
    };
  }
  return k;
}

/// amplitude * e^{-x-y} on the half line; rank one, smooth, with a zero
/// radial limit.
inline LinearKernel exp_separable(double amplitude = 1.0) {
  LinearKernel k;
  k.value_dim = 1;
  k.eval = [amplitude](const Point& x, const Point& y) {
    return mat1(amplitude * std::exp(-x(0) - y(0)));
  };
  k.domination = [amplitude](const Point& y) { return amplitude * std::exp(-y(0)); };
  k.domination_tail = [amplitude](double T) { return amplitude * std::exp(-T); };
  k.radial_limit = [](const Point&, const Point&) { return mat1(0.0); };
  k.car4_bound = amplitude;
  return k;
}

/// Mollifier factor of the Volterra-to-Fredholm approximation: per axis,
/// 1 below the boundary, an affine ramp of width 1/m above it, 0 beyond.
inline double volterra_mollifier(double xk, double yk, int m) {
  if (yk <= xk) return 1.0;
  if (yk < xk + 1.0 / m) return -m * yk + m * xk + 1.0;
  return 0.0;
}

/// K_m(x,y) = K(x,y) * prod_k mollifier(x_k, y_k).  Continuous in x (unlike
/// the sharp-cutoff kernel, which is not and is deliberately not provided).
inline LinearKernel mollified_volterra(const LinearKernel& base, int m, int dim) {
  if (m < 1) throw InvalidArgument("mollified_volterra: m >= 1");
  LinearKernel k;
  k.value_dim = base.value_dim;
  const auto base_eval = base.eval;
  k.eval = [base_eval, m, dim](const Point& x, const Point& y) -> Mat {
    double factor = 1.0;
    for (int a = 0; a < dim; ++a) {
      factor *= volterra_mollifier(x(a), y(a), m);
      if (factor == 0.0) break;
    }
    if (factor == 0.0) {
      Mat v = base_eval(x, y);
      v.setZero();
      return v;
    }
    return factor * base_eval(x, y);
  };
  k.domination = base.domination;          // mollifier <= 1
  k.domination_tail = base.domination_tail;
  k.car4_bound = base.car4_bound;
  const auto base_locus = base.kink_locus;
  k.kink_locus = [base_locus, m, dim](const Point& x) {
    std::vector<std::vector<double>> s =
        base_locus ? base_locus(x) : std::vector<std::vector<double>>(dim);
    if (s.empty()) s.resize(dim);
    for (int a = 0; a < dim; ++a) {
      s[a].push_back(x(a));
      s[a].push_back(x(a) + 1.0 / m);
    }
    return s;
  };
  return k;
}

/// Kernel tabulated as CSV rows `x,y,k11,...,kdd` (1-d domains), bilinearly
/// interpolated with constant extension.  No tail metadata is declared, so
/// checkers that need certified tails refuse it.
inline LinearKernel tabulated_kernel(std::istream& csv) {
  std::string header;
  if (!std::getline(csv, header)) throw ParseError("empty kernel table", 1);
  std::vector<std::string> cols;
  {
    std::string cur;
    for (char ch : header) {
      if (ch == ',') {
        cols.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    cols.push_back(cur);
  }
  if (cols.size() < 3 || cols[0] != "x" || cols[1] != "y")
    throw ParseError("kernel table header must be x,y,k11,...,kdd", 1);
  for (std::size_t i = 2; i < cols.size(); ++i)
    if (cols[i].empty() || cols[i][0] != 'k')
      throw ParseError("unexpected kernel table column '" + cols[i] + "'", 1);
  std::ostringstream normalized;
  normalized << "x1,x2";
  for (std::size_t i = 2; i < cols.size(); ++i) normalized << ",v" << (i - 1);
  normalized << "\n" << csv.rdbuf();
  std::istringstream in(normalized.str());
  auto table = std::make_shared<SampledFunction>(
      SampledFunction::read_csv(in, Domain::box(2)));
  const int d2 = table->value_dim();
  const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
  if (d * d != d2)
    throw InvalidArgument("tabulated kernel needs d*d value columns");
  LinearKernel k;
  k.value_dim = d;
  k.eval = [table, d](const Point& x, const Point& y) {
    Point xy(2);
    xy(0) = x(0);
    xy(1) = y(0);
    Vec flat = table->eval(xy);
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = flat(r * d + c);
    return m;
  };
  return k;
}

/// e^{-x-y} (1 + u / (1 + u^2)) on R+ x R+ x R; the model kernel whose
/// uniform bound is constant in M once M >= 1.
inline UrysohnKernel urysohn_rational() {
  auto hmax = [](double M) {
    return (M >= 1.0) ? 0.5 : M / (1.0 + M * M);
  };
  UrysohnKernel k;
  k.value_dim = 1;
  k.eval = [](double x, double y, const Vec& u) {
    const double s = u(0);
    return vec1(std::exp(-x - y) * (1.0 + s / (1.0 + s * s)));
  };
  k.asymptote = [](double x, double y) { return vec1(std::exp(-x - y)); };
  k.envelope = [hmax](double y, double M) {
    return std::exp(-y) * (1.0 + hmax(M));
  };
  k.envelope_tail = [hmax](double T, double M) {
    return std::exp(-T) * (1.0 + hmax(M));
  };
  // |K - b| = e^{-x-y} |u|/(1+u^2) <= hmax(M) e^{-y}
  k.asymptote_tail = [hmax](double T, double M) { return hmax(M) * std::exp(-T); };
  k.uniform_modulus_x = [](double eta) { return eta; };  // |d/dx K| <= |K| <= 3/2
  return k;
}

/// e^{-x-y} (1 + u e^{-y} / (1 + u^2)): the u-dependent part decays like
/// e^{-2y}, so the asymptote b = e^{-x-y} has a certified quadratic tail.
inline UrysohnKernel urysohn_rational_decay() {
  auto hmax = [](double M) {
    return (M >= 1.0) ? 0.5 : M / (1.0 + M * M);
  };
  UrysohnKernel k;
  k.value_dim = 1;
  k.eval = [](double x, double y, const Vec& u) {
    const double s = u(0);
    return vec1(std::exp(-x - y) * (1.0 + s * std::exp(-y) / (1.0 + s * s)));
  };
  k.asymptote = [](double x, double y) { return vec1(std::exp(-x - y)); };
  k.envelope = [hmax](double y, double M) {
    return std::exp(-y) + hmax(M) * std::exp(-2.0 * y);
  };
  k.envelope_tail = [hmax](double T, double M) {
    return std::exp(-T) + 0.5 * hmax(M) * std::exp(-2.0 * T);
  };
  // |K - b| = e^{-x-2y} |u|/(1+u^2) <= hmax(M) e^{-2y}
  k.asymptote_tail = [hmax](double T, double M) {
    return 0.5 * hmax(M) * std::exp(-2.0 * T);
  };
  k.uniform_modulus_x = [](double eta) { return eta; };
  return k;
}

}  // namespace ascoli
