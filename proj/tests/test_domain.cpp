// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "ascoli/domain.hpp"

using namespace ascoli;

TEST_CASE("domain construction and validation") {
  Domain h = Domain::half_line();
  CHECK(h.dim() == 1);
  CHECK(h.contains(point1(0.0)));
  CHECK(h.contains(point1(3.5)));
  CHECK_FALSE(h.contains(point1(-1e-9)));

  Domain r = Domain::real_line({0.5, 1.0, 2.0});
  CHECK(r.contains(point1(-100.0)));
  CHECK(r.exhaustion_radii().size() == 3);

  Domain b = Domain::box(2);
  Point p(2);
  p << 1.0, -2.0;
  CHECK(b.contains(p));

  CHECK_THROWS_AS(Domain(DomainKind::half_line, 2, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(Domain::box(4), InvalidArgument);
  CHECK_THROWS_AS(Domain::real_line({}), InvalidArgument);
  CHECK_THROWS_AS(Domain::real_line({1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(Domain::real_line({2.0, 1.0}), InvalidArgument);
}

TEST_CASE("truncated regions") {
  Domain h = Domain::half_line();
  auto [a, b] = h.truncated_axis(3.0);
  CHECK(a == 0.0);
  CHECK(b == 3.0);
  CHECK(h.truncated_volume(3.0) == 3.0);

  Domain box = Domain::box(3);
  CHECK(box.truncated_volume(2.0) == Catch::Approx(64.0));
  CHECK_THROWS_AS(h.truncated_axis(0.0), InvalidArgument);
}

TEST_CASE("exhaustion radii strictly increase") {
  Domain d = Domain::real_line();
  const auto& r = d.exhaustion_radii();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(r[i] < r[i + 1]);
  CHECK(r.front() > 0.0);
}
