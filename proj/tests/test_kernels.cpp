// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ascoli/kernel_checks.hpp"
#include "ascoli/kernel_library.hpp"

using namespace ascoli;

namespace {

LinearKernel abs_diff_kernel(double x_window) {
  // e^{-|x-y|}; domination only valid while |x| <= x_window
  ExponentialFamilyOptions opt;
  opt.g = [](const Point& x) { return x; };
  opt.g_sup = x_window;
  opt.dim = 1;
  return exponential_family(std::move(opt));
}

LinearKernel saturating_kernel() {
  // e^{-|g(x)-y|} with g(x) = x / (1 + |x|): bounded drift with radial limits
  ExponentialFamilyOptions opt;
  opt.g = [](const Point& x) { return Point(x / (1.0 + x.norm())); };
  opt.g_sup = 1.0;
  opt.g_limit = [](const Point& v) { return v; };
  opt.dim = 1;
  return exponential_family(std::move(opt));
}

LinearKernel zero_kernel() {
  LinearKernel k;
  k.value_dim = 1;
  k.eval = [](const Point&, const Point&) { return mat1(0.0); };
  k.domination = [](const Point&) { return 0.0; };
  k.domination_tail = [](double) { return 0.0; };
  return k;
}

LinearKernel x_independent_kernel() {
  LinearKernel k;
  k.value_dim = 1;
  k.eval = [](const Point&, const Point& y) { return mat1(std::exp(-std::abs(y(0)))); };
  k.domination = [](const Point& y) { return std::exp(-std::abs(y(0))); };
  k.domination_tail = [](double T) { return 2.0 * std::exp(-T); };
  k.radial_limit = [](const Point&, const Point& y) {
    return mat1(std::exp(-std::abs(y(0))));
  };
  k.kink_locus = [](const Point&) { return std::vector<std::vector<double>>{{0.0}}; };
  return k;
}

LinearKernel oscillating_kernel() {
  // e^{-|y|} sin(x): no radial limit, the Cauchy decay condition fails
  LinearKernel k;
  k.value_dim = 1;
  k.eval = [](const Point& x, const Point& y) {
    return mat1(std::exp(-std::abs(y(0))) * std::sin(x(0)));
  };
  k.domination = [](const Point& y) { return std::exp(-std::abs(y(0))); };
  k.domination_tail = [](double T) { return 2.0 * std::exp(-T); };
  k.kink_locus = [](const Point&) { return std::vector<std::vector<double>>{{0.0}}; };
  return k;
}

}  // namespace

TEST_CASE("check_car4 oracles") {
  auto plan = build_plan(Domain::real_line(), 25.0, 25);

  // translation invariance: int e^{-|x-y|} dy = 2 for every x
  auto k = abs_diff_kernel(5.0);
  std::vector<Point> xs = {point1(-4.0), point1(0.0), point1(3.3)};
  CHECK(check_car4(k, xs, plan) == Catch::Approx(2.0).margin(1e-8));

  CHECK(check_car4(zero_kernel(), xs, plan) == 0.0);

  // Example-family kernel with bounded drift: independent of the probe set
  auto sk = saturating_kernel();
  const double a = check_car4(sk, {point1(0.0)}, plan);
  const double b = check_car4(sk, {point1(-7.0), point1(2.0), point1(40.0)}, plan);
  CHECK(a == Catch::Approx(2.0).margin(1e-8));
  CHECK(std::abs(a - b) < 1e-9);

  CHECK_THROWS_AS(check_car4(k, {}, plan), InvalidArgument);
}

TEST_CASE("check_car4 includes the attached tail bound") {
  auto k = saturating_kernel();
  auto plan = build_plan(Domain::real_line(), 25.0, 25)
                  .attach_tail_bound(k.domination_tail(25.0));
  const double v = check_car4(k, {point1(0.0)}, plan);
  CHECK(v >= 2.0);  // tail bound recentres the truncation loss upward
  CHECK(v == Catch::Approx(2.0).margin(1e-8));
}

TEST_CASE("check_k2 certifies decay along rays and flags failures") {
  auto plan = build_plan(Domain::real_line(), 20.0, 20);
  auto dirs = unit_directions(1);

  // x-independent kernel: differences vanish, first radius certifies
  auto rep0 = check_k2(x_independent_kernel(), 1e-3, dirs, plan);
  CHECK(rep0.certified);
  for (const auto& d : rep0.directions) CHECK(d.t_radius == 1.0);

  // saturating drift: finite certified radius per direction
  auto rep = check_k2(saturating_kernel(), 1e-3, dirs, plan);
  CHECK(rep.certified);
  CHECK(rep.sup_radius > 100.0);
  CHECK(rep.sup_radius < 1e5);

  // oscillating kernel: not certified
  auto bad = check_k2(oscillating_kernel(), 1e-3, dirs, plan);
  CHECK_FALSE(bad.certified);
  bool any_note = false;
  for (const auto& d : bad.directions) any_note = any_note || !d.note.empty();
  CHECK(any_note);
}

TEST_CASE("oscillating kernel difference oracle") {
  // direct evaluation at t = T, s = T + pi: |sin T - sin(T+pi)| = 2|sin T|
  auto plan = build_plan(Domain::real_line(), 20.0, 20);
  auto k = oscillating_kernel();
  const double T = 7.0;
  Point xa = point1(T), xb = point1(T + std::numbers::pi);
  const double diff = integrate(
      plan,
      [&](const Point& y) { return operator_norm(k(xa, y) - k(xb, y)); },
      {{0.0}});
  // int e^{-|y|} dy over [-20, 20] times 2|sin 7|
  CHECK(diff == Catch::Approx(4.0 * std::abs(std::sin(T))).margin(1e-6));
}

TEST_CASE("check_k1_via_limit certifies declared limits") {
  auto plan = build_plan(Domain::real_line(), 25.0, 25);
  auto dirs = unit_directions(1);

  auto rep0 = check_k1_via_limit(x_independent_kernel(), 1e-3, dirs, plan);
  CHECK(rep0.certified);
  for (const auto& d : rep0.directions) CHECK(d.t_radius == 1.0);

  auto rep = check_k1_via_limit(saturating_kernel(), 1e-3, dirs, plan);
  CHECK(rep.certified);

  // deliberately wrong limit: the gap stays ~2 and certification fails
  auto wrong = saturating_kernel();
  wrong.radial_limit = [](const Point&, const Point&) { return mat1(0.0); };
  auto bad = check_k1_via_limit(wrong, 1e-3, dirs, plan);
  CHECK_FALSE(bad.certified);

  auto no_limit = abs_diff_kernel(5.0);
  no_limit.radial_limit = nullptr;
  CHECK_THROWS_AS(check_k1_via_limit(no_limit, 1e-3, dirs, plan), Unsupported);
}

TEST_CASE("equivalence of the limit and Cauchy conditions on builtins") {
  auto plan = build_plan(Domain::real_line(), 25.0, 25);
  auto dirs = unit_directions(1);
  const double eps = 1e-3;

  for (auto k : {saturating_kernel(), x_independent_kernel()}) {
    // limit condition at eps implies Cauchy condition at 2 eps
    auto k1 = check_k1_via_limit(k, eps, dirs, plan);
    REQUIRE(k1.certified);
    auto k2 = check_k2(k, 2.0 * eps, dirs, plan);
    CHECK(k2.certified);
    for (std::size_t i = 0; i < dirs.size(); ++i)
      CHECK(k2.directions[i].t_radius <= k1.directions[i].t_radius + 1e-9);

    // Cauchy condition at eps yields a constructed limit passing at 2 eps
    auto k2a = check_k2(k, eps, dirs, plan);
    REQUIRE(k2a.certified);
    const double far = 8.0 * std::max(1.0, k2a.sup_radius);
    LinearKernel with_constructed = k;
    auto base_eval = k.eval;
    with_constructed.radial_limit = [base_eval, far](const Point& v, const Point& y) {
      return base_eval(far * v, y);
    };
    auto k1b = check_k1_via_limit(with_constructed, 2.0 * eps, dirs, plan);
    CHECK(k1b.certified);
  }
}

TEST_CASE("mollifier factor values") {
  const int m = 4;
  CHECK(volterra_mollifier(1.0, 1.0, m) == 1.0);
  CHECK(volterra_mollifier(1.0, 1.0 + 1.0 / m, m) == 0.0);
  CHECK(volterra_mollifier(1.0, 1.0 + 0.5 / m, m) == Catch::Approx(0.5));
  CHECK(volterra_mollifier(1.0, 0.2, m) == 1.0);
  CHECK(volterra_mollifier(1.0, 3.0, m) == 0.0);
}

TEST_CASE("mollified kernel is continuous in x") {
  auto base = abs_diff_kernel(2.0);
  for (int m : {1, 8, 64}) {
    auto km = mollified_volterra(base, m, 1);
    const double h = 1e-9;
    for (double y : {0.29, 0.3 + 0.5 / m, 0.3 + 0.9 / m}) {
      const double v0 = km(point1(0.3), point1(y))(0, 0);
      const double v1 = km(point1(0.3 + h), point1(y))(0, 0);
      CHECK(std::abs(v1 - v0) <= 4.0 * m * h + 1e-15);
    }
  }
}

TEST_CASE("exponential family basics") {
  auto k = abs_diff_kernel(1.0);
  CHECK(k(point1(0.7), point1(0.7))(0, 0) == Catch::Approx(1.0));
  REQUIRE(k.car4_bound);
  CHECK(*k.car4_bound == Catch::Approx(2.0));
  // declared domination dominates on a sample
  for (double x : {-0.9, 0.0, 0.5}) {
    for (double y : {-3.0, 0.1, 7.0}) {
      CHECK(operator_norm(k(point1(x), point1(y))) <=
            k.domination(point1(y)) + 1e-12);
    }
  }
  // tail shape: 2 e^{-(T - g_sup)}
  CHECK(k.domination_tail(5.0) == Catch::Approx(2.0 * std::exp(-(5.0 - 1.0))));
}

TEST_CASE("tabulated kernel parses and interpolates") {
  std::istringstream csv(
      "x,y,k11\n"
      "0,0,1\n"
      "0,1,2\n"
      "1,0,3\n"
      "1,1,4\n");
  auto k = tabulated_kernel(csv);
  CHECK(k(point1(0.0), point1(0.0))(0, 0) == 1.0);
  CHECK(k(point1(1.0), point1(1.0))(0, 0) == 4.0);
  CHECK(k(point1(0.5), point1(0.5))(0, 0) == Catch::Approx(2.5));
  CHECK(k(point1(9.0), point1(9.0))(0, 0) == 4.0);  // constant extension

  std::istringstream bad(
      "x,y,k11\n"
      "0,0,1\n"
      "0,1,oops\n");
  CHECK_THROWS_AS(tabulated_kernel(bad), ParseError);
}

TEST_CASE("estimate_K_M against the rational-kernel calculus oracle") {
  auto k = urysohn_rational();
  auto plan = build_plan(Domain::half_line(), 30.0, 30);
  std::vector<double> xs = {0.0, 0.5, 2.0};

  // max of u/(1+u^2) is 1/2 at u = 1, so K_M = 3/2 once M >= 1
  for (double M : {1.0, 2.0, 5.0}) {
    auto est = estimate_K_M(k, M, xs, plan);
    CHECK(est.envelope_based == Catch::Approx(1.5).margin(1e-9));
    CHECK(est.sampled == Catch::Approx(1.5).margin(2e-4));
    CHECK(est.sampled <= est.envelope_based + 1e-9);
    CHECK_FALSE(est.gap_flagged);
  }
  // a sample grid hitting u = 1 exactly reproduces the analytic value
  auto fine = estimate_K_M(k, 2.0, xs, plan, 4001);
  CHECK(fine.sampled == Catch::Approx(1.5).margin(1e-6));

  // u-independent kernel: K_M = 1 attained at x = 0
  UrysohnKernel indep = k;
  indep.eval = [](double x, double y, const Vec&) { return vec1(std::exp(-x - y)); };
  indep.envelope = [](double y, double) { return std::exp(-y); };
  indep.envelope_tail = [](double T, double) { return std::exp(-T); };
  auto e1 = estimate_K_M(indep, 3.0, xs, plan);
  CHECK(e1.sampled == Catch::Approx(1.0).margin(1e-9));

  // zero kernel
  UrysohnKernel zk = k;
  zk.eval = [](double, double, const Vec&) { return vec1(0.0); };
  zk.envelope = [](double, double) { return 0.0; };
  zk.envelope_tail = [](double, double) { return 0.0; };
  CHECK(estimate_K_M(zk, 2.0, xs, plan).sampled == 0.0);
}

TEST_CASE("estimate_K_M is nondecreasing in M") {
  auto k = urysohn_rational_decay();
  auto plan = build_plan(Domain::half_line(), 30.0, 30);
  std::vector<double> xs = {0.0, 1.0};
  double prev_env = -1.0, prev_sampled = -1.0;
  for (double M : {0.1, 0.3, 0.8, 1.0, 2.0, 8.0}) {
    auto est = estimate_K_M(k, M, xs, plan);
    CHECK(est.envelope_based >= prev_env - 1e-12);
    // the sampled inner sup can wiggle by its sampling modulus
    CHECK(est.sampled >= prev_sampled - 2e-4 * (1.0 + prev_sampled));
    prev_env = est.envelope_based;
    prev_sampled = est.sampled;
  }
}

TEST_CASE("condition B audit") {
  std::vector<double> xs = {0.0, 0.5, 1.0, 4.0};

  SECTION("u-independent kernel with b = K certifies at the first radius") {
    auto k = urysohn_rational();
    k.eval = [](double x, double y, const Vec&) { return vec1(std::exp(-x - y)); };
    k.asymptote = [](double x, double y) { return vec1(std::exp(-x - y)); };
    k.asymptote_tail = nullptr;  // exercise the envelope-derived fallback
    auto rep = check_condition_B(k, 1e-6, 1.0, xs);
    CHECK(rep.certified);
    CHECK(rep.T == 1.0);
    CHECK(rep.checked_tail <= 1e-6);
  }

  SECTION("decaying u-dependence certifies at the analytic radius") {
    // declared tail hmax(M) e^{-2T}/2 with M = 1e-3 crosses 1e-6 near
    // T = -ln(2e-3) / 2 ~ 3.107
    auto k = urysohn_rational_decay();
    auto rep = check_condition_B(k, 1e-6, 1e-3, xs);
    CHECK(rep.certified);
    CHECK(rep.T >= 3.0);
    CHECK(rep.T <= 3.3);
    CHECK(rep.checked_tail <= 1e-6);
  }

  SECTION("misdeclaring b as zero is caught by the declaration spot-check") {
    auto k = urysohn_rational_decay();
    k.asymptote = [](double, double) { return vec1(0.0); };
    auto rep = check_condition_B(k, 1e-6, 1e-3, xs);
    CHECK_FALSE(rep.certified);
    CHECK(rep.note.find("not certified") != std::string::npos);
  }

  SECTION("missing asymptote is unsupported") {
    auto k = urysohn_rational_decay();
    k.asymptote = nullptr;
    CHECK_THROWS_AS(check_condition_B(k, 1e-6, 1.0, xs), Unsupported);
  }
}

TEST_CASE("unit direction sets are deterministic grids") {
  CHECK(unit_directions(1).size() == 2);
  CHECK(unit_directions(2).size() == 64);
  CHECK(unit_directions(3).size() == 162);
  for (int n : {1, 2, 3})
    for (const auto& v : unit_directions(n))
      CHECK(v.norm() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(unit_directions(4), InvalidArgument);
}

TEST_CASE("ball samples stay inside and reach the boundary") {
  for (int d : {1, 2, 3}) {
    auto s = ball_samples(d, 2.0, 64);
    REQUIRE(s.size() == 64);
    double max_norm = 0.0;
    for (const auto& u : s) {
      CHECK(u.norm() <= 2.0 + 1e-12);
      max_norm = std::max(max_norm, u.norm());
    }
    CHECK(max_norm == Catch::Approx(2.0).epsilon(1e-9));
  }
  // deterministic across calls
  auto a = ball_samples(2, 1.0, 16), b = ball_samples(2, 1.0, 16);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
}

TEST_CASE("urysohn metadata sanity cross-checks on builtins") {
  for (auto k : {urysohn_rational(), urysohn_rational_decay()}) {
    // declared envelope really dominates sampled evaluations
    for (double M : {0.5, 1.0, 3.0}) {
      auto us = ball_samples(1, M, 33);
      for (double x : {0.0, 1.0, 4.0})
        for (double y : {0.0, 0.7, 2.5, 9.0})
          for (const auto& u : us)
            CHECK(k.eval(x, y, u).norm() <= k.envelope(y, M) + 1e-12);
    }
    // asymptote bounded by envelope(y, 0) + envelope(y, M)
    for (double x : {0.0, 2.0})
      for (double y : {0.0, 1.0, 5.0})
        CHECK(k.asymptote(x, y).norm() <=
              k.envelope(y, 0.0) + k.envelope(y, 1.0) + 1e-12);
  }
}

TEST_CASE("parallel checkers match the serial results exactly") {
  ExponentialFamilyOptions opt;
  opt.g = [](const Point& x) { return Point(x / (1.0 + x.norm())); };
  opt.g_sup = 1.0;
  opt.g_limit = [](const Point& v) { return v; };
  opt.dim = 1;
  auto k = exponential_family(std::move(opt));
  auto plan = build_plan(Domain::real_line(), 20.0, 20);
  std::vector<Point> xs;
  for (double x : {-3.0, -1.0, 0.0, 2.0, 5.0}) xs.push_back(point1(x));
  CHECK(check_car4(k, xs, plan, 1) == check_car4(k, xs, plan, 4));
  auto a = check_k2(k, 1e-2, unit_directions(1), plan, 1);
  auto b = check_k2(k, 1e-2, unit_directions(1), plan, 4);
  CHECK(a.sup_radius == b.sup_radius);
}
