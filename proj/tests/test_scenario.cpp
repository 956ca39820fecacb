// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ascoli/json_reports.hpp"
#include "ascoli/scenario.hpp"

using namespace ascoli;

TEST_CASE("ini parsing") {
  std::istringstream is(
      "# comment\n"
      "[scenario]\n"
      "name = demo\n"
      "\n"
      "; another comment\n"
      "[grids]\n"
      "output = -1:1:5\n"
      "eps_tail = 1e-8\n");
  auto ini = IniFile::parse(is);
  CHECK(ini.require("scenario", "name") == "demo");
  CHECK(ini.get_or("grids", "panels", "auto") == "auto");
  CHECK(ini.number("grids", "eps_tail") == 1e-8);
  CHECK_FALSE(ini.get("grids", "missing"));
  CHECK_THROWS_AS(ini.require("grids", "missing"), InvalidArgument);
}

TEST_CASE("ini parse errors carry line numbers") {
  std::istringstream empty("");
  try {
    IniFile::parse(empty);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }

  std::istringstream blank("\n\n  \n");
  CHECK_THROWS_AS(IniFile::parse(blank), ParseError);

  std::istringstream noeq("[a]\nkeyvalue\n");
  try {
    IniFile::parse(noeq);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream orphan("key = 1\n");
  CHECK_THROWS_AS(IniFile::parse(orphan), ParseError);
  std::istringstream badsec("[oops\n");
  CHECK_THROWS_AS(IniFile::parse(badsec), ParseError);
}

TEST_CASE("grid expressions") {
  auto lin = parse_grid("-1:1:5", "test");
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == -1.0);
  CHECK(lin.back() == 1.0);
  CHECK(lin[2] == 0.0);

  auto list = parse_grid("0.5, 1, 2", "test");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == 1.0);

  CHECK_THROWS_AS(parse_grid("1:2", "test"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("2:1:5", "test"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("", "test"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("a,b", "test"), InvalidArgument);
}

TEST_CASE("domain from scenario") {
  std::istringstream is("[domain]\nkind = half_line\nradii = 1,2,4\n");
  auto ini = IniFile::parse(is);
  auto d = scenario_domain(ini);
  CHECK(d.kind() == DomainKind::half_line);
  CHECK(d.exhaustion_radii() == std::vector<double>{1, 2, 4});

  std::istringstream bad("[domain]\nkind = circle\n");
  CHECK_THROWS_AS(scenario_domain(IniFile::parse(bad)), InvalidArgument);
}

TEST_CASE("kernel registry dispatch and validation") {
  std::istringstream ok("[kernel]\nname = exp_saturating\n");
  auto k = scenario_linear_kernel(IniFile::parse(ok));
  CHECK(k.radial_limit != nullptr);
  CHECK(k.car4_bound);

  std::istringstream amp("[kernel]\nname = exp_abs_diff\namplitude = 0.25\ng_sup = 5\n");
  auto ka = scenario_linear_kernel(IniFile::parse(amp));
  CHECK(ka(point1(1.0), point1(1.0))(0, 0) == Catch::Approx(0.25));

  std::istringstream unknown("[kernel]\nname = bessel\n");
  CHECK_THROWS_AS(scenario_linear_kernel(IniFile::parse(unknown)), InvalidArgument);

  std::istringstream ury("[kernel]\nname = urysohn_rational\n");
  CHECK(kernel_name_is_urysohn("urysohn_rational"));
  CHECK_FALSE(kernel_name_is_urysohn("exp_separable"));
  CHECK_NOTHROW(scenario_urysohn_kernel(IniFile::parse(ury)));
  std::istringstream un2("[kernel]\nname = urysohn_cubic\n");
  CHECK_THROWS_AS(scenario_urysohn_kernel(IniFile::parse(un2)), InvalidArgument);
}

TEST_CASE("nonlinearity registry") {
  std::istringstream aff("[nonlinearity]\nname = affine\na = 1\nb = 0.5\n");
  auto F = scenario_nonlinearity(IniFile::parse(aff));
  CHECK(F.eval(point1(0.0), vec1(2.0))(0) == Catch::Approx(2.0));
  CHECK(F.phi(2.0) == Catch::Approx(2.0));

  std::istringstream bad("[nonlinearity]\nname = cubic\n");
  CHECK_THROWS_AS(scenario_nonlinearity(IniFile::parse(bad)), InvalidArgument);
}

TEST_CASE("plan resolution with auto truncation") {
  std::istringstream is(
      "[domain]\nkind = real_line\n"
      "[grids]\nquadrature_T = auto\npanels = auto\neps_tail = 1e-8\n");
  auto ini = IniFile::parse(is);
  auto d = scenario_domain(ini);
  auto tail = [](double T) { return 2.0 * std::exp(-(T - 5.0)); };
  auto choice = scenario_plan(ini, d, tail);
  CHECK(choice.auto_T);
  CHECK(tail(choice.plan.truncation_radius) <= 1e-8);
  CHECK(choice.plan.tail_bound <= 1e-8);
  CHECK(choice.plan.panels_per_axis >= 8);

  // auto truncation without tail metadata is refused
  CHECK_THROWS_AS(scenario_plan(ini, d, nullptr), InvalidArgument);

  std::istringstream fixed(
      "[domain]\nkind = real_line\n"
      "[grids]\nquadrature_T = 12\npanels = 24\n");
  auto ini2 = IniFile::parse(fixed);
  auto choice2 = scenario_plan(ini2, d, tail);
  CHECK_FALSE(choice2.auto_T);
  CHECK(choice2.plan.truncation_radius == 12.0);
  CHECK(choice2.plan.panels_per_axis == 24);
}

TEST_CASE("scenario hash is stable and content-sensitive") {
  const std::string a = "[scenario]\nname = a\n";
  const std::string b = "[scenario]\nname = b\n";
  CHECK(fnv1a(a) == fnv1a(a));
  CHECK(fnv1a(a) != fnv1a(b));
  CHECK(hex64(fnv1a(a)).size() == 16);
}

TEST_CASE("certificate json round trip") {
  AACertificate cert;
  cert.bound_M = 2.0;
  cert.sample_size = 10;
  cert.provenance = "test";
  cert.modulus = {{point1(0.0), 0.25, 0.1}, {point1(0.0), 0.5, 0.2}};
  cert.extension = {{0.1, 2.0, 0.025}, {0.01, 4.0, 0.0025}};
  auto j = certificate_json(cert);
  CHECK(j["note"] == "empirical certificate");
  auto back = certificate_from_json(j);
  CHECK(back.bound_M == cert.bound_M);
  CHECK(back.sample_size == cert.sample_size);
  REQUIRE(back.modulus.size() == 2);
  CHECK(back.modulus[1].omega == 0.2);
  REQUIRE(back.extension.size() == 2);
  CHECK(back.extension[0].delta == 0.025);
}

TEST_CASE("plan summary json fields") {
  auto plan = build_plan(Domain::half_line(), 10.0, 4).attach_tail_bound(1e-9);
  auto j = plan_summary(plan);
  CHECK(j["T"] == 10.0);
  CHECK(j["panels"] == 4);
  CHECK(j["nodes"] == 32);
  CHECK(j["tail_bound"] == 1e-9);
}
