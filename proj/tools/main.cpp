// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0
//
// Scenario-driven front end: parse one scenario file, dispatch to the
// operator/solver/certification layers, persist CSV/JSON artifacts plus a
// manifest sufficient to re-run the scenario exactly.  Exit codes: 0 on
// success, 2 on certified-failure outcomes (a condition audit that says
// "not certified" is a result, not a crash), 1 on errors.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ascoli/families.hpp"
#include "ascoli/json_reports.hpp"
#include "ascoli/scenario.hpp"
#include "ascoli/solvers.hpp"
#include "ascoli/version.hpp"

namespace fs = std::filesystem;
using namespace ascoli;

namespace {

struct RunContext {
  IniFile ini;
  std::string scenario_path;
  std::string scenario_text;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::vector<std::string> outputs;

  std::string path(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }
  void record(const std::string& name) { outputs.push_back(name); }
};

RunContext make_context(const std::string& scenario, const std::string& out_flag,
                        std::optional<std::uint64_t> seed_flag, int threads) {
  RunContext ctx;
  ctx.scenario_path = scenario;
  {
    std::ifstream is(scenario, std::ios::binary);
    if (!is) throw Error("cannot open scenario file " + scenario);
    std::ostringstream buf;
    buf << is.rdbuf();
    ctx.scenario_text = buf.str();
  }
  {
    std::istringstream is(ctx.scenario_text);
    ctx.ini = IniFile::parse(is);
  }
  ctx.out_dir = !out_flag.empty() ? out_flag : ctx.ini.get_or("output", "dir", "out");
  ctx.threads = threads;
  if (seed_flag) {
    ctx.seed = *seed_flag;
    ctx.seed_set = true;
  } else if (auto s = ctx.ini.get("certify", "seed")) {
    ctx.seed = static_cast<std::uint64_t>(IniFile::to_double(*s, "certify", "seed"));
    ctx.seed_set = true;
  }
  fs::create_directories(ctx.out_dir);
  return ctx;
}

void write_manifest(const RunContext& ctx, const std::string& subcommand) {
  Json outputs = Json::array();
  for (const auto& o : ctx.outputs) outputs.push_back(o);
  Json manifest{{"name", ctx.ini.get_or("scenario", "name", "unnamed")},
                {"subcommand", subcommand},
                {"scenario_path", ctx.scenario_path},
                {"scenario_hash", hex64(fnv1a(ctx.scenario_text))},
                {"seed", ctx.seed},
                {"seed_set", ctx.seed_set},
                {"threads", ctx.threads},
                {"version", kVersion},
                {"outputs", outputs},
                {"scenario_text", ctx.scenario_text}};
  write_json_file((fs::path(ctx.out_dir) / "manifest.json").string(), manifest);
}

std::vector<double> output_grid(const RunContext& ctx, const Domain& x_domain) {
  const std::string fallback =
      x_domain.kind() == DomainKind::half_line ? "0:10:21" : "-5:5:21";
  return parse_grid(ctx.ini.get_or("grids", "output", fallback), "[grids] output");
}

std::vector<double> input_grid(const RunContext& ctx, const Domain& y_domain) {
  const std::string fallback =
      y_domain.kind() == DomainKind::half_line ? "0:16:65" : "-16:16:129";
  return parse_grid(ctx.ini.get_or("grids", "input", fallback), "[grids] input");
}

SampledFunction scenario_input(const RunContext& ctx, const Domain& y_domain) {
  const std::string kind = ctx.ini.get_or("input", "kind", "constant");
  if (kind == "constant") {
    const double value = ctx.ini.number("input", "value", 1.0);
    return SampledFunction::constant(y_domain, {{0.0}}, vec1(value));
  }
  if (kind == "expdecay") {
    return SampledFunction::sample(y_domain, {input_grid(ctx, y_domain)},
                                   [](const Point& y) {
                                     return vec1(std::exp(-y.norm()));
                                   });
  }
  if (kind == "csv") {
    const std::string file = ctx.ini.require("input", "file");
    std::ifstream is(file);
    if (!is) throw Error("cannot open input function file " + file);
    return SampledFunction::read_csv(is, y_domain);
  }
  throw InvalidArgument("unknown [input] kind '" + kind +
                        "' (known: constant, expdecay, csv)");
}

Domain operator_x_domain(const std::string& op_kind, const Domain& y_domain) {
  if (op_kind == "urysohn") return Domain::half_line(y_domain.exhaustion_radii());
  return y_domain;
}

OperatorKind parse_operator_kind(const std::string& s) {
  if (s == "fredholm") return OperatorKind::fredholm;
  if (s == "hammerstein") return OperatorKind::hammerstein;
  if (s == "urysohn") return OperatorKind::urysohn;
  if (s == "volterra") return OperatorKind::volterra;
  throw InvalidArgument("unknown [operator] kind '" + s + "'");
}

void write_function_csv(RunContext& ctx, const std::string& name,
                        const SampledFunction& f) {
  std::ostringstream os;
  f.write_csv(os);
  write_text_file(ctx.path(name), os.str());
  ctx.record(name);
}

// ---------------------------------------------------------------- apply --

int run_apply(RunContext& ctx) {
  const Domain y = scenario_domain(ctx.ini);
  const std::string op_kind = ctx.ini.get_or("operator", "kind", "fredholm");
  const OperatorKind kind = parse_operator_kind(op_kind);

  OperatorSpec spec;
  spec.kind = kind;
  spec.x_domain = operator_x_domain(op_kind, y);
  spec.output_axes = {output_grid(ctx, spec.x_domain)};
  spec.eps_tail = ctx.ini.number("grids", "eps_tail", 1e-8);
  spec.threads = ctx.threads;

  Json sidecar;
  SampledFunction out = SampledFunction::constant(y, {{0.0}}, vec1(0.0));
  if (kind == OperatorKind::urysohn) {
    spec.urysohn = scenario_urysohn_kernel(ctx.ini);
    const double m_ref = ctx.ini.number("check", "M", 1.0);
    auto tail = spec.urysohn.envelope_tail
                    ? std::function<double(double)>([&spec, m_ref](double T) {
                        return spec.urysohn.envelope_tail(T, m_ref);
                      })
                    : std::function<double(double)>();
    auto choice = scenario_plan(ctx.ini, y, tail);
    spec.plan = choice.plan;
    auto f = scenario_input(ctx, y);
    out = apply_urysohn(spec, f);
    auto km = estimate_K_M(spec.urysohn, sup_norm(f), {0.0}, spec.plan,
                           static_cast<int>(ctx.ini.number("check", "u_samples", 128)),
                           ctx.threads);
    sidecar = Json{{"K_M", km.sampled},
                   {"sup_out", sup_norm(out)},
                   {"tail_eps", spec.eps_tail},
                   {"plan", plan_summary(spec.plan)}};
  } else {
    spec.kernel = scenario_linear_kernel(ctx.ini);
    if (kind == OperatorKind::hammerstein)
      spec.nonlinearity = scenario_nonlinearity(ctx.ini);
    auto choice = scenario_plan(ctx.ini, y, spec.kernel.domination_tail);
    spec.plan = choice.plan;
    auto f = scenario_input(ctx, y);
    out = (kind == OperatorKind::fredholm)   ? apply_fredholm(spec, f)
          : (kind == OperatorKind::volterra) ? apply_volterra(spec, f)
                                             : apply_hammerstein(spec, f);
    std::vector<Point> xs;
    for (std::size_t i = 0; i < out.size(); ++i) xs.push_back(out.grid_point(i));
    const double car4 = spec.kernel.car4_bound
                            ? *spec.kernel.car4_bound
                            : check_car4(spec.kernel, xs, spec.plan, ctx.threads);
    // growth guard beyond the output grid
    Json probes = Json::array();
    for (double factor : {2.0, 4.0}) {
      Point x = point1(factor * spec.plan.truncation_radius);
      if (!spec.x_domain.contains(x)) continue;
      OperatorSpec probe_spec = spec;
      probe_spec.output_axes = {{x(0)}};
      SampledFunction pf = (kind == OperatorKind::fredholm)
                               ? apply_fredholm(probe_spec, f)
                           : (kind == OperatorKind::volterra)
                               ? apply_volterra(probe_spec, f)
                               : apply_hammerstein(probe_spec, f);
      probes.push_back(Json::array({x(0), pf.value(0).norm()}));
    }
    sidecar = Json{{"car4", car4},
                   {"sup_out", sup_norm(out)},
                   {"tail_eps", spec.eps_tail},
                   {"plan", plan_summary(spec.plan)},
                   {"radial_probe", probes}};
  }
  write_function_csv(ctx, "output.csv", out);
  write_json_file(ctx.path("apply.json"), sidecar);
  ctx.record("apply.json");
  return 0;
}

// ------------------------------------------------------- solve-fredholm --

int run_solve_fredholm(RunContext& ctx) {
  const Domain y = scenario_domain(ctx.ini);
  auto kernel = scenario_linear_kernel(ctx.ini);
  auto choice = scenario_plan(ctx.ini, y, kernel.domination_tail);
  const double lambda = ctx.ini.number("solver", "lambda", 1.0);

  const std::string g_kind = ctx.ini.get_or("input", "kind", "expdecay");
  std::function<Vec(const Point&)> g;
  if (g_kind == "expdecay") {
    g = [](const Point& x) { return vec1(std::exp(-x.norm())); };
  } else if (g_kind == "constant") {
    const double value = ctx.ini.number("input", "value", 1.0);
    g = [value](const Point&) { return vec1(value); };
  } else if (g_kind == "csv") {
    const std::string file = ctx.ini.require("input", "file");
    std::ifstream is(file);
    if (!is) throw Error("cannot open input function file " + file);
    auto table = std::make_shared<SampledFunction>(SampledFunction::read_csv(is, y));
    g = [table](const Point& x) { return table->eval(x); };
  } else {
    throw InvalidArgument("unknown [input] kind '" + g_kind + "'");
  }

  auto res = solve_fredholm_2nd_kind(kernel, g, lambda, choice.plan, 1e12,
                                     ctx.threads);
  write_function_csv(ctx, "solution.csv", res.solution);
  Json warnings = Json::array();
  for (const auto& w : res.warnings) warnings.push_back(w);
  write_json_file(ctx.path("solve.json"),
                  Json{{"lambda", lambda},
                       {"residual", res.residual},
                       {"condition", res.condition_estimate},
                       {"warnings", warnings},
                       {"plan", plan_summary(choice.plan)}});
  ctx.record("solve.json");
  return 0;
}

// ----------------------------------------------------------- fixed-point --

int run_fixed_point(RunContext& ctx) {
  const Domain y = scenario_domain(ctx.ini);
  const std::string op_kind = ctx.ini.get_or("operator", "kind", "hammerstein");
  const double tol = ctx.ini.number("solver", "tol", 1e-8);
  const int max_iter = static_cast<int>(ctx.ini.number("solver", "max_iter", 100));
  const double alpha = ctx.ini.number("solver", "alpha", 0.5);

  OperatorSpec spec;
  spec.x_domain = operator_x_domain(op_kind, y);
  spec.output_axes = {output_grid(ctx, spec.x_domain)};
  spec.eps_tail = ctx.ini.number("grids", "eps_tail", 1e-8);
  spec.threads = ctx.threads;

  Json report;
  FixedPointReport rep;
  double radius = 0.0;

  if (op_kind == "hammerstein") {
    spec.kind = OperatorKind::hammerstein;
    spec.kernel = scenario_linear_kernel(ctx.ini);
    spec.nonlinearity = scenario_nonlinearity(ctx.ini);
    spec.plan = scenario_plan(ctx.ini, y, spec.kernel.domination_tail).plan;
    std::vector<Point> xs;
    for (double x : spec.output_axes[0]) xs.push_back(point1(x));
    const double c = spec.kernel.car4_bound
                         ? *spec.kernel.car4_bound
                         : check_car4(spec.kernel, xs, spec.plan, ctx.threads);
    auto scan = hammerstein_radius(c, spec.nonlinearity->phi,
                                   ctx.ini.number("solver", "radius_search_max", 10.0));
    report["c"] = c;
    report["radius_scan"] = radius_scan_json(scan);
    if (!scan.t_star) {
      report["converged"] = false;
      write_json_file(ctx.path("fixed_point.json"), report);
      ctx.record("fixed_point.json");
      return 2;
    }
    radius = *scan.t_star;
    auto f0 = SampledFunction::constant(spec.x_domain, spec.output_axes, vec1(0.0));
    rep = picard_solve(
        [&](const SampledFunction& f) { return apply_hammerstein(spec, f); }, f0,
        radius, alpha, tol, max_iter);
  } else if (op_kind == "urysohn") {
    spec.kind = OperatorKind::urysohn;
    spec.urysohn = scenario_urysohn_kernel(ctx.ini);
    auto m_grid = parse_grid(ctx.ini.get_or("solver", "M_grid", "0.25,0.5,1,2,4"),
                             "[solver] M_grid");
    const double m_ref = m_grid.back();
    spec.plan = scenario_plan(ctx.ini, y,
                              [&spec, m_ref](double T) {
                                return spec.urysohn.envelope_tail(T, m_ref);
                              })
                    .plan;
    std::vector<double> xs = parse_grid(ctx.ini.get_or("check", "xs", "0:5:6"),
                                        "[check] xs");
    auto rr = urysohn_radius(spec.urysohn, xs, spec.plan, m_grid,
                             static_cast<int>(ctx.ini.number("check", "u_samples", 128)),
                             ctx.threads);
    report["radius_search"] = urysohn_radius_json(rr);
    if (!rr.R) {
      report["converged"] = false;
      write_json_file(ctx.path("fixed_point.json"), report);
      ctx.record("fixed_point.json");
      return 2;
    }
    radius = *rr.R;
    auto f0 = SampledFunction::constant(spec.x_domain, spec.output_axes, vec1(0.0));
    rep = picard_solve(
        [&](const SampledFunction& f) { return apply_urysohn(spec, f); }, f0,
        radius, alpha, tol, max_iter);
  } else {
    throw InvalidArgument("[operator] kind must be hammerstein or urysohn for "
                          "fixed-point, got '" +
                          op_kind + "'");
  }

  report["report"] = fixed_point_json(rep);
  write_json_file(ctx.path("fixed_point.json"), report);
  ctx.record("fixed_point.json");
  if (rep.solution) write_function_csv(ctx, "solution.csv", *rep.solution);
  return rep.converged ? 0 : 2;
}

// ---------------------------------------------------------- check-kernel --

int run_check_kernel(RunContext& ctx) {
  const Domain y = scenario_domain(ctx.ini);
  const std::string name = ctx.ini.require("kernel", "name");
  const double eps = ctx.ini.number("check", "eps", 1e-3);
  Json out;
  bool certified = true;

  if (kernel_name_is_urysohn(name)) {
    auto k = scenario_urysohn_kernel(ctx.ini);
    const double M = ctx.ini.number("check", "M", 1.0);
    const int u_samples = static_cast<int>(ctx.ini.number("check", "u_samples", 128));
    std::vector<double> xs =
        parse_grid(ctx.ini.get_or("check", "xs", "0:5:6"), "[check] xs");
    auto plan = scenario_plan(ctx.ini, y, [&k, M](double T) {
                  return k.envelope_tail(T, M);
                }).plan;
    auto km = estimate_K_M(k, M, xs, plan, u_samples, ctx.threads);
    out["K_M"] = km_estimate_json(M, km);
    const double eps_b = ctx.ini.number("check", "eps_b", 1e-6);
    auto b = check_condition_B(k, eps_b, M, xs, u_samples);
    out["condition_B"] = condition_b_json(b, eps_b, M);
    certified = b.certified;
  } else {
    auto k = scenario_linear_kernel(ctx.ini);
    auto plan = scenario_plan(ctx.ini, y, k.domination_tail).plan;
    std::vector<double> xs_grid = parse_grid(
        ctx.ini.get_or("check", "xs",
                       y.kind() == DomainKind::half_line ? "0:5:11" : "-5:5:21"),
        "[check] xs");
    std::vector<Point> xs;
    for (double x : xs_grid) xs.push_back(point1(x));
    out["car4"] = check_car4(k, xs, plan, ctx.threads);
    auto dirs = unit_directions(y.dim());
    auto k2 = check_k2(k, eps, dirs, plan, ctx.threads);
    out["k2"] = condition_report_json(k2);
    certified = k2.certified;
    if (k.radial_limit) {
      auto k1 = check_k1_via_limit(k, eps, dirs, plan, ctx.threads);
      out["k1"] = condition_report_json(k1);
      certified = certified && k1.certified;
    }
  }
  out["certified"] = certified;
  write_json_file(ctx.path("check.json"), out);
  ctx.record("check.json");
  return certified ? 0 : 2;
}

// --------------------------------------------------------------- certify --

int run_certify(RunContext& ctx) {
  const Domain y = scenario_domain(ctx.ini);
  const std::string family_kind = ctx.ini.get_or("certify", "family", "fredholm_images");
  auto eps_list = parse_grid(ctx.ini.get_or("certify", "eps_list", "0.1,0.01,0.001"),
                             "[certify] eps_list");
  auto delta_grid = parse_grid(ctx.ini.get_or("certify", "delta_grid", "0.25,0.5,1"),
                               "[certify] delta_grid");

  FunctionFamily fam, holdout;
  std::function<double(double)> hint;
  std::optional<double> uniform_bound;
  std::optional<LinearKernel> kernel;
  QuadraturePlan plan;

  if (family_kind == "fredholm_images") {
    if (!ctx.seed_set)
      throw InvalidArgument("random family generation requires a seed "
                            "([certify] seed or --seed)");
    const int fam_size = static_cast<int>(ctx.ini.number("certify", "family_size", 100.0));
    const int hold_size = static_cast<int>(ctx.ini.number("certify", "holdout_size", 50.0));
    kernel = scenario_linear_kernel(ctx.ini);
    plan = scenario_plan(ctx.ini, y, kernel->domination_tail).plan;

    OperatorSpec spec;
    spec.kind = OperatorKind::fredholm;
    spec.kernel = *kernel;
    spec.x_domain = y;
    spec.output_axes = {output_grid(ctx, y)};
    spec.plan = plan;
    spec.eps_tail = ctx.ini.number("grids", "eps_tail", 1e-8);
    spec.threads = ctx.threads;

    auto inputs = trig_decay_unit_ball(y, {input_grid(ctx, y)},
                                       fam_size + hold_size, 1, ctx.seed);
    fam.provenance = "Fredholm image of " + std::to_string(fam_size) +
                     " unit-ball samples (seed " + std::to_string(ctx.seed) + ")";
    holdout.provenance = "holdout of " + std::to_string(hold_size) + " fresh samples";
    for (int i = 0; i < fam_size; ++i)
      fam.members.push_back(apply_fredholm(spec, inputs[i]));
    for (int i = fam_size; i < fam_size + hold_size; ++i)
      holdout.members.push_back(apply_fredholm(spec, inputs[i]));

    auto dirs = unit_directions(y.dim());
    const LinearKernel kref = *kernel;
    const QuadraturePlan plan_copy = plan;
    hint = [kref, plan_copy, dirs](double T) {
      double worst = 0.0;
      const double probes[4] = {T, 2.0 * T, 4.0 * T, 8.0 * T};
      for (const auto& v : dirs)
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) {
            Point xa = probes[a] * v, xb = probes[b] * v;
            auto splits = merge_splits(kref.splits_at(xa), kref.splits_at(xb));
            worst = std::max(
                worst,
                integrate(
                    plan_copy,
                    [&](const Point& yy) {
                      return operator_norm(kref(xa, yy) - kref(xb, yy));
                    },
                    splits));
          }
      return worst + 2.0 * plan_copy.tail_bound;
    };
    if (kernel->car4_bound) uniform_bound = *kernel->car4_bound;  // unit-ball inputs
  } else if (family_kind == "translate_ramps") {
    auto offsets = parse_grid(ctx.ini.get_or("certify", "offsets", "9,10,11,12,13,14"),
                              "[certify] offsets");
    auto grid = input_grid(ctx, y);
    auto all = translate_ramps(y, {grid}, offsets);
    fam.provenance = "translate ramps";
    holdout.provenance = "translate ramps (holdout)";
    for (std::size_t i = 0; i < all.size(); ++i)
      (i % 2 == 0 ? fam : holdout).members.push_back(all[i]);
  } else {
    throw InvalidArgument("unknown [certify] family '" + family_kind +
                          "' (known: fredholm_images, translate_ramps)");
  }

  AACertificate cert;
  cert.sample_size = static_cast<int>(fam.members.size());
  cert.provenance = fam.provenance;
  cert.bound_M = estimate_bound(fam);
  if (uniform_bound) cert.bound_M = std::max(cert.bound_M, *uniform_bound);

  auto probes = default_probe_points(fam);
  cert.modulus = estimate_modulus(fam, probes, delta_grid);
  if (kernel) {
    // raise empirical rows to the kernel-difference bound, which holds for
    // every unit-ball image, then monotonize over the delta grid
    for (auto& row : cert.modulus) {
      double bound = 0.0;
      for (double frac : {1.0, 0.5}) {
        for (double sign : {1.0, -1.0}) {
          Point x1 = row.x + sign * frac * row.delta * Point::Ones(row.x.size());
          auto splits = merge_splits(kernel->splits_at(row.x), kernel->splits_at(x1));
          bound = std::max(bound, integrate(
                                      plan,
                                      [&](const Point& yy) {
                                        return operator_norm((*kernel)(row.x, yy) -
                                                             (*kernel)(x1, yy));
                                      },
                                      splits));
        }
      }
      row.omega = std::max(row.omega, bound);
    }
    for (std::size_t i = 1; i < cert.modulus.size(); ++i)
      if (same_point(cert.modulus[i].x, cert.modulus[i - 1].x))
        cert.modulus[i].omega = std::max(cert.modulus[i].omega,
                                         cert.modulus[i - 1].omega);
  }

  std::vector<double> missing;
  for (double eps : eps_list) {
    auto w = find_extension_witness(fam, eps, hint, ctx.threads);
    if (w)
      cert.extension.push_back({eps, w->T, w->delta});
    else
      missing.push_back(eps);
  }
  if (missing.empty()) cert.validate();

  Json cert_json = certificate_json(cert);
  Json missing_json = Json::array();
  for (double eps : missing) missing_json.push_back(eps);
  cert_json["missing_eps"] = missing_json;
  write_json_file(ctx.path("certificate.json"), cert_json);
  ctx.record("certificate.json");

  auto verification = verify_certificate(holdout, cert, {}, ctx.threads);
  write_json_file(ctx.path("verification.json"), verification_json(verification));
  ctx.record("verification.json");

  return (missing.empty() && verification.pass) ? 0 : 2;
}

// -------------------------------------------------------- volterra-approx --

int run_volterra_approx(RunContext& ctx) {
  const Domain y = scenario_domain(ctx.ini);
  if (!ctx.seed_set)
    throw InvalidArgument("random family generation requires a seed "
                          "([certify] seed or --seed)");
  auto kernel = scenario_linear_kernel(ctx.ini);

  OperatorSpec spec;
  spec.kind = OperatorKind::volterra;
  spec.kernel = kernel;
  spec.x_domain = y;
  spec.output_axes = {output_grid(ctx, y)};
  spec.plan = scenario_plan(ctx.ini, y, kernel.domination_tail).plan;
  spec.eps_tail = ctx.ini.number("grids", "eps_tail", 1e-8);
  spec.threads = ctx.threads;

  auto m_grid = parse_grid(ctx.ini.get_or("volterra_approx", "m_list", "1,2,4,8,16,32,64"),
                           "[volterra_approx] m_list");
  const int fam_size =
      static_cast<int>(ctx.ini.number("volterra_approx", "family_size", 10.0));
  auto inputs = trig_decay_unit_ball(y, {input_grid(ctx, y)}, fam_size, 1, ctx.seed);

  std::ostringstream csv;
  csv << "m,measured,bound\n";
  std::vector<double> logm, logerr;
  bool within_bound = true;
  for (double md : m_grid) {
    const int m = static_cast<int>(md);
    double worst = 0.0, bound = 0.0;
    for (const auto& f : inputs) {
      auto res = volterra_approx_error(spec, f, m);
      worst = std::max(worst, res.measured);
      bound = std::max(bound, res.bound);
      within_bound = within_bound && (res.measured <= res.bound + 1e-8);
    }
    csv << detail::format_double(m) << "," << detail::format_double(worst) << ","
        << detail::format_double(bound) << "\n";
    logm.push_back(std::log(md));
    logerr.push_back(std::log(std::max(worst, 1e-300)));
  }
  write_text_file(ctx.path("volterra_approx.csv"), csv.str());
  ctx.record("volterra_approx.csv");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(logm.size());
  for (int i = 0; i < n; ++i) {
    sx += logm[i];
    sy += logerr[i];
    sxx += logm[i] * logm[i];
    sxy += logm[i] * logerr[i];
  }
  const double slope =
      (n > 1) ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  write_json_file(ctx.path("volterra_approx.json"),
                  Json{{"slope", slope},
                       {"within_bound", within_bound},
                       {"family_size", fam_size},
                       {"plan", plan_summary(spec.plan)}});
  ctx.record("volterra_approx.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integral operators on unbounded domains: apply, solve, audit, certify"};
  app.require_subcommand(1);

  std::string scenario, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  app.add_option("--scenario", scenario, "scenario file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--seed", seed, "seed override (overrides [certify] seed)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* c_apply = app.add_subcommand("apply", "apply the operator to an input function");
  auto* c_solve = app.add_subcommand("solve-fredholm", "Nystrom solve of f = g + lambda T f");
  auto* c_fixed = app.add_subcommand("fixed-point", "radius search plus damped Picard iteration");
  auto* c_check = app.add_subcommand("check-kernel", "kernel condition audits");
  auto* c_cert = app.add_subcommand("certify", "compactness certificate plus holdout verification");
  auto* c_volt = app.add_subcommand("volterra-approx", "Volterra-vs-mollified-Fredholm error study");

  CLI11_PARSE(app, argc, argv);

  try {
    RunContext ctx = make_context(scenario, out_dir, seed, threads);
    int code = 1;
    std::string sub;
    if (c_apply->parsed()) {
      sub = "apply";
      code = run_apply(ctx);
    } else if (c_solve->parsed()) {
      sub = "solve-fredholm";
      code = run_solve_fredholm(ctx);
    } else if (c_fixed->parsed()) {
      sub = "fixed-point";
      code = run_fixed_point(ctx);
    } else if (c_check->parsed()) {
      sub = "check-kernel";
      code = run_check_kernel(ctx);
    } else if (c_cert->parsed()) {
      sub = "certify";
      code = run_certify(ctx);
    } else if (c_volt->parsed()) {
      sub = "volterra-approx";
      code = run_volterra_approx(ctx);
    }
    write_manifest(ctx, sub);
    return code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
