// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ascoli/compactness.hpp"
#include "ascoli/rng.hpp"
#include "ascoli/sampled_function.hpp"

namespace ascoli {

/// Seeded unit-ball test inputs: smooth trigonometric-decay profiles
///   f(y) = sum_{j<=8} a_j cos(j * s(y)) * e^{-||y||/2},  s(y) = y_1+...+y_n,
/// with coefficients drawn uniformly from [-1, 1] and the whole function
/// scaled so its grid sup-norm is exactly 1.
inline std::vector<SampledFunction> trig_decay_unit_ball(
    const Domain& domain, const std::vector<std::vector<double>>& axes, int count,
    int value_dim, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("family size must be >= 1");
  if (value_dim < 1) throw InvalidArgument("value dimension must be >= 1");
  Rng rng(seed);
  std::vector<SampledFunction> out;
  out.reserve(count);
  for (int member = 0; member < count; ++member) {
    std::vector<std::vector<double>> coeff(value_dim, std::vector<double>(8));
    for (int k = 0; k < value_dim; ++k)
      for (int j = 0; j < 8; ++j) coeff[k][j] = rng.uniform(-1.0, 1.0);
    auto profile = [&](const Point& y) {
      const double s = y.sum();
      const double decay = std::exp(-0.5 * y.norm());
      Vec v(value_dim);
      for (int k = 0; k < value_dim; ++k) {
        double acc = 0.0;
        for (int j = 0; j < 8; ++j) acc += coeff[k][j] * std::cos((j + 1) * s);
        v(k) = acc * decay;
      }
      return v;
    };
    SampledFunction f = SampledFunction::sample(domain, axes, profile);
    const double s = sup_norm(f);
    if (s > 0.0) {
      std::vector<Vec> scaled(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) scaled[i] = f.value(i) / s;
      f = SampledFunction(domain, axes, std::move(scaled));
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// The classic non-compact family on the half line: unit ramps r_c(x) that
/// are 0 up to x = c and rise linearly to 1 by x = c + 1.  Any two members
/// agree near the origin yet differ by 1 far out, so no extension witness
/// can exist once eps < 1.
inline std::vector<SampledFunction> translate_ramps(
    const Domain& domain, const std::vector<std::vector<double>>& axes,
    const std::vector<double>& offsets) {
  if (domain.dim() != 1) throw InvalidArgument("translate_ramps is one-dimensional");
  std::vector<SampledFunction> out;
  out.reserve(offsets.size());
  for (double c : offsets) {
    out.push_back(SampledFunction::sample(domain, axes, [c](const Point& y) {
      const double t = y(0) - c;
      return vec1(t <= 0.0 ? 0.0 : (t >= 1.0 ? 1.0 : t));
    }));
  }
  return out;
}

}  // namespace ascoli
