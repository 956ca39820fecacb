// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ascoli/parallel.hpp"
#include "ascoli/quadrature.hpp"
#include "ascoli/sampled_function.hpp"

namespace ascoli {

inline bool same_point(const Point& a, const Point& b) {
  return a.size() == b.size() && (a - b).isZero(0.0);
}

/// A finite family of sampled functions on one shared grid: the computable
/// stand-in for a subset of the bounded continuous functions.
struct FunctionFamily {
  std::vector<SampledFunction> members;
  std::string provenance;

  void validate() const {
    if (members.size() < 2) throw InvalidArgument("a family needs at least 2 members");
    for (std::size_t i = 1; i < members.size(); ++i)
      if (!members[i].same_grid(members.front()))
        throw InvalidArgument("family members must share one grid");
  }

  const Domain& domain() const { return members.front().domain(); }
};

struct ModulusRow {
  Point x;
  double delta = 0.0;
  double omega = 0.0;  // max member oscillation within delta of x
};

struct ExtensionRow {
  double eps = 0.0;
  double T = 0.0;
  double delta = 0.0;
};

/// Empirical witness of the two compactness conditions: a uniform bound M,
/// an equicontinuity modulus table, and rows (eps, T, delta) certifying
/// that closeness on the ball of radius T forces closeness everywhere.
/// A finite sample can only certify itself plus a holdout; reports carry
/// sample_size and the label "empirical certificate".
struct AACertificate {
  double bound_M = 0.0;
  std::vector<ModulusRow> modulus;
  std::vector<ExtensionRow> extension;
  int sample_size = 0;
  std::string provenance;

  void validate() const {
    // omega nondecreasing in delta at fixed probe point
    for (std::size_t i = 0; i + 1 < modulus.size(); ++i) {
      if (same_point(modulus[i].x, modulus[i + 1].x) && modulus[i].delta <= modulus[i + 1].delta &&
          modulus[i].omega > modulus[i + 1].omega + 1e-12)
        throw InvalidArgument("modulus table is not nondecreasing in delta");
    }
    // T nondecreasing as eps decreases
    auto rows = extension;
    std::sort(rows.begin(), rows.end(),
              [](const ExtensionRow& a, const ExtensionRow& b) { return a.eps > b.eps; });
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      if (rows[i].T > rows[i + 1].T + 1e-12)
        throw InvalidArgument("extension table: T must not decrease as eps decreases");
  }
};

/// Uniform grid bound over the family (pointwise boundedness stands in for
/// pointwise relative compactness in finite dimension).
inline double estimate_bound(const FunctionFamily& fam) {
  fam.validate();
  double m = 0.0;
  for (const auto& f : fam.members) m = std::max(m, sup_norm(f));
  return m;
}

/// omega(x, delta) = max over members f and grid points x' with
/// ||x' - x|| <= delta of ||f(x') - f(x)||.
inline std::vector<ModulusRow> estimate_modulus(const FunctionFamily& fam,
                                                const std::vector<Point>& probe_points,
                                                const std::vector<double>& delta_grid) {
  fam.validate();
  for (std::size_t i = 0; i + 1 < delta_grid.size(); ++i)
    if (!(delta_grid[i] > 0.0) || !(delta_grid[i] < delta_grid[i + 1]))
      throw InvalidArgument("delta grid must be positive and increasing");
  if (!delta_grid.empty() && !(delta_grid.front() > 0.0))
    throw InvalidArgument("delta grid must be positive");
  const auto& proto = fam.members.front();
  std::vector<ModulusRow> rows;
  for (const Point& x : probe_points) {
    if (!proto.domain().contains(x))
      throw DomainError("modulus probe point " + point_to_string(x) +
                        " is outside the domain");
    std::vector<Vec> at_x;
    at_x.reserve(fam.members.size());
    for (const auto& f : fam.members) at_x.push_back(f.eval(x));
    for (double delta : delta_grid) {
      double omega = 0.0;
      for (std::size_t g = 0; g < proto.size(); ++g) {
        if ((proto.grid_point(g) - x).norm() > delta) continue;
        for (std::size_t m = 0; m < fam.members.size(); ++m)
          omega = std::max(omega, (fam.members[m].value(g) - at_x[m]).norm());
      }
      rows.push_back({x, delta, omega});
    }
  }
  return rows;
}

namespace detail {

struct PairDistances {
  std::vector<double> within;  // restricted to ||x|| <= T
  std::vector<double> overall;
};

inline PairDistances pair_distances(const FunctionFamily& fam, double T,
                                    int threads) {
  const std::size_t n = fam.members.size();
  const std::size_t pairs = n * (n - 1) / 2;
  PairDistances d;
  d.within.resize(pairs);
  d.overall.resize(pairs);
  parallel_for(pairs, threads, [&](std::size_t p) {
    // unrank p -> (i, j), i < j
    std::size_t i = 0, acc = 0;
    while (acc + (n - 1 - i) <= p) acc += (n - 1 - i), ++i;
    const std::size_t j = i + 1 + (p - acc);
    d.within[p] = sup_distance(fam.members[i], fam.members[j], T);
    d.overall[p] = sup_distance(fam.members[i], fam.members[j]);
  });
  return d;
}

}  // namespace detail

struct ExtensionWitness {
  double T = 0.0;
  double delta = 0.0;
};

/// Searches for (T, delta) such that for every member pair, closeness within
/// delta on {||x|| <= T} implies closeness within eps everywhere.  With a
/// kernel-derived tail hint the construction T = radius(tail <= eps/4),
/// delta = eps/4 is tried first and validated; otherwise candidate T values
/// walk the domain's exhaustion radii and delta is the largest of 64
/// logarithmic candidates in [eps/100, eps] that no pair violates.
/// Soundness is asserted on the input family before returning.
inline std::optional<ExtensionWitness> find_extension_witness(
    const FunctionFamily& fam, double eps,
    const std::function<double(double)>& tail_hint = nullptr, int threads = 1) {
  fam.validate();
  if (!(eps > 0.0)) throw InvalidArgument("find_extension_witness needs eps > 0");

  auto violates = [&](double T, double delta) -> bool {
    auto d = detail::pair_distances(fam, T, threads);
    for (std::size_t p = 0; p < d.within.size(); ++p)
      if (d.within[p] <= delta && d.overall[p] > eps) return true;
    return false;
  };

  if (tail_hint) {
    try {
      const double T = find_truncation_radius(tail_hint, eps / 4.0);
      const double delta = eps / 4.0;
      if (!violates(T, delta)) return ExtensionWitness{T, delta};
      // fall through to the empirical search
    } catch (const NoConvergence&) {
    }
  }

  for (double T : fam.domain().exhaustion_radii()) {
    auto d = detail::pair_distances(fam, T, threads);
    // Largest admissible delta must stay below every "bad" pair's restricted
    // distance, where bad means the pair is eps-separated somewhere.
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < d.within.size(); ++p)
      if (d.overall[p] > eps) dmin = std::min(dmin, d.within[p]);
    double best = -1.0;
    for (int c = 0; c < 64; ++c) {
      const double delta = (eps / 100.0) * std::pow(100.0, c / 63.0);
      if (delta < dmin && delta > best) best = delta;
    }
    if (best >= eps / 100.0) {
      if (violates(T, best))
        throw NumericError("extension witness failed its soundness re-check");
      return ExtensionWitness{T, best};
    }
  }
  return std::nullopt;
}

struct CertificateViolation {
  std::string kind;  // "bound" | "modulus" | "extension"
  double eps = 0.0;
  std::size_t member_i = 0, member_j = 0;
  double observed = 0.0;
  double allowed = 0.0;
  std::string detail;
};

struct VerificationReport {
  bool pass = false;
  double holdout_bound = 0.0;
  std::vector<CertificateViolation> violations;
};

/// Re-checks a certificate against a held-out family on the same grid:
/// the uniform bound and modulus table with 5% slack, and every
/// (eps, T, delta) implication on all holdout pairs.  Violations are report
/// content, not errors.
inline VerificationReport verify_certificate(const FunctionFamily& holdout,
                                             const AACertificate& cert,
                                             const std::vector<double>& eps_list = {},
                                             int threads = 1) {
  holdout.validate();
  VerificationReport rep;
  rep.holdout_bound = estimate_bound(holdout);
  if (rep.holdout_bound > cert.bound_M * 1.05 + 1e-12) {
    rep.violations.push_back({"bound", 0.0, 0, 0, rep.holdout_bound,
                              cert.bound_M * 1.05, "holdout exceeds bound_M + 5%"});
  }
  // Modulus rows with 5% slack.
  {
    std::vector<Point> probes;
    std::vector<double> deltas;
    for (const auto& row : cert.modulus) {
      bool seen_probe = false;
      for (const auto& p : probes) seen_probe = seen_probe || same_point(p, row.x);
      if (!seen_probe) probes.push_back(row.x);
      if (std::find(deltas.begin(), deltas.end(), row.delta) == deltas.end())
        deltas.push_back(row.delta);
    }
    std::sort(deltas.begin(), deltas.end());
    if (!probes.empty() && !deltas.empty()) {
      auto rows = estimate_modulus(holdout, probes, deltas);
      for (const auto& hrow : rows) {
        for (const auto& crow : cert.modulus) {
          if (same_point(crow.x, hrow.x) && crow.delta == hrow.delta &&
              hrow.omega > crow.omega * 1.05 + 1e-12) {
            rep.violations.push_back({"modulus", 0.0, 0, 0, hrow.omega,
                                      crow.omega * 1.05,
                                      "holdout oscillation at x = " +
                                          point_to_string(hrow.x) + ", delta = " +
                                          std::to_string(hrow.delta)});
          }
        }
      }
    }
  }
  // Extension rows.
  const std::size_t n = holdout.members.size();
  for (const auto& row : cert.extension) {
    if (!eps_list.empty() &&
        std::find(eps_list.begin(), eps_list.end(), row.eps) == eps_list.end())
      continue;
    auto d = detail::pair_distances(holdout, row.T, threads);
    for (std::size_t p = 0; p < d.within.size(); ++p) {
      if (d.within[p] <= row.delta && d.overall[p] > row.eps) {
        std::size_t i = 0, acc = 0;
        while (acc + (n - 1 - i) <= p) acc += (n - 1 - i), ++i;
        const std::size_t j = i + 1 + (p - acc);
        rep.violations.push_back({"extension", row.eps, i, j, d.overall[p], row.eps,
                                  "pair close on ||x|| <= " + std::to_string(row.T) +
                                      " but separated overall"});
      }
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

/// Default probe points: the member grid restricted to the first exhaustion
/// radius, plus up to 8 points on its boundary sphere.
inline std::vector<Point> default_probe_points(const FunctionFamily& fam) {
  fam.validate();
  const auto& proto = fam.members.front();
  const double r1 = proto.domain().exhaustion_radii().front();
  std::vector<Point> probes;
  for (std::size_t g = 0; g < proto.size(); ++g) {
    Point p = proto.grid_point(g);
    if (p.norm() <= r1) probes.push_back(p);
  }
  const int n = proto.dim();
  if (n == 1) {
    probes.push_back(point1(r1));
    if (proto.domain().kind() != DomainKind::half_line) probes.push_back(point1(-r1));
  } else {
    for (int i = 0; i < 8; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 8.0;
      Point p = Point::Zero(n);
      p(0) = r1 * std::cos(a);
      p(1) = r1 * std::sin(a);
      probes.push_back(p);
    }
  }
  return probes;
}

}  // namespace ascoli
