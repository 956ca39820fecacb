// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ascoli/errors.hpp"
#include "ascoli/kernel_checks.hpp"
#include "ascoli/kernel_library.hpp"
#include "ascoli/operators.hpp"

namespace ascoli {

/// Flat sectioned key-value scenario format: `[section]` headers, `key = value`
/// lines, comments starting with '#' or ';'.  One file describes one run.
class IniFile {
 public:
  static IniFile parse(std::istream& is) {
    IniFile ini;
    std::string line;
    int lineno = 0;
    std::string section;
    bool any_content = false;
    while (std::getline(is, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      any_content = true;
      if (t.front() == '[') {
        if (t.back() != ']' || t.size() < 3)
          throw ParseError("malformed section header '" + t + "'", lineno);
        section = trim(t.substr(1, t.size() - 2));
        ini.sections_[section];
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected 'key = value' but got '" + t + "'", lineno);
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ParseError("empty key", lineno);
      if (section.empty())
        throw ParseError("key '" + key + "' appears before any [section]", lineno);
      ini.sections_[section][key] = value;
    }
    if (!any_content) throw ParseError("empty scenario file", 1);
    return ini;
  }

  static IniFile parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open scenario file " + path);
    return parse(is);
  }

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    auto v = get(section, key);
    return v ? *v : fallback;
  }

  std::string require(const std::string& section, const std::string& key) const {
    auto v = get(section, key);
    if (!v)
      throw InvalidArgument("scenario is missing [" + section + "] " + key);
    return *v;
  }

  double number(const std::string& section, const std::string& key,
                std::optional<double> fallback = std::nullopt) const {
    auto v = get(section, key);
    if (!v) {
      if (fallback) return *fallback;
      throw InvalidArgument("scenario is missing [" + section + "] " + key);
    }
    return to_double(*v, section, key);
  }

  bool has_section(const std::string& section) const {
    return sections_.count(section) > 0;
  }

  static double to_double(const std::string& s, const std::string& section,
                          const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw InvalidArgument("[" + section + "] " + key + ": cannot parse number '" +
                            s + "'");
    return v;
  }

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// "a:b:count" linspace or a comma list of numbers.
inline std::vector<double> parse_grid(const std::string& text,
                                      const std::string& context) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text)
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    parts.push_back(cur);
    if (parts.size() != 3)
      throw InvalidArgument(context + ": expected a:b:count, got '" + text + "'");
    const double a = IniFile::to_double(parts[0], context, "grid");
    const double b = IniFile::to_double(parts[1], context, "grid");
    const int count = static_cast<int>(IniFile::to_double(parts[2], context, "grid"));
    if (count < 2 || !(b > a))
      throw InvalidArgument(context + ": bad linspace '" + text + "'");
    for (int i = 0; i < count; ++i)
      out.push_back(a + (b - a) * i / (count - 1));
    return out;
  }
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ',')) {
    cur = IniFile::trim(cur);
    if (!cur.empty()) out.push_back(IniFile::to_double(cur, context, "list"));
  }
  if (out.empty()) throw InvalidArgument(context + ": empty list '" + text + "'");
  return out;
}

inline Domain scenario_domain(const IniFile& ini) {
  const std::string kind = ini.get_or("domain", "kind", "real_line");
  std::vector<double> radii = Domain::default_radii();
  if (auto r = ini.get("domain", "radii")) radii = parse_grid(*r, "[domain] radii");
  if (kind == "half_line") return Domain::half_line(std::move(radii));
  if (kind == "real_line") return Domain::real_line(std::move(radii));
  if (kind == "box")
    return Domain::box(static_cast<int>(ini.number("domain", "dim", 2.0)),
                       std::move(radii));
  throw InvalidArgument("[domain] kind must be half_line, real_line or box, got '" +
                        kind + "'");
}

inline bool kernel_name_is_urysohn(const std::string& name) {
  return name.rfind("urysohn_", 0) == 0;
}

/// Kernel registry.  Linear: exp_abs_diff, exp_saturating, exp_separable,
/// mollified_exp_abs, oscillating, tabulated.  Urysohn: urysohn_rational,
/// urysohn_rational_decay.
inline LinearKernel scenario_linear_kernel(const IniFile& ini) {
  const std::string name = ini.require("kernel", "name");
  const double amplitude = ini.number("kernel", "amplitude", 1.0);
  if (name == "exp_abs_diff") {
    ExponentialFamilyOptions opt;
    opt.g = [](const Point& x) { return x; };
    opt.g_sup = ini.number("kernel", "g_sup", 5.0);
    opt.amplitude = amplitude;
    opt.dim = 1;
    return exponential_family(std::move(opt));
  }
  if (name == "exp_saturating") {
    ExponentialFamilyOptions opt;
    opt.g = [](const Point& x) { return Point(x / (1.0 + x.norm())); };
    opt.g_sup = 1.0;
    opt.g_limit = [](const Point& v) { return v; };
    opt.amplitude = amplitude;
    opt.dim = 1;
    return exponential_family(std::move(opt));
  }
  if (name == "exp_separable") return exp_separable(amplitude);
  if (name == "mollified_exp_abs") {
    const int m = static_cast<int>(ini.number("kernel", "m", 1.0));
    ExponentialFamilyOptions opt;
    opt.g = [](const Point& x) { return x; };
    opt.g_sup = ini.number("kernel", "g_sup", 5.0);
    opt.amplitude = amplitude;
    opt.dim = 1;
    return mollified_volterra(exponential_family(std::move(opt)), m, 1);
  }
  if (name == "oscillating") {
    LinearKernel k;
    k.value_dim = 1;
    k.eval = [amplitude](const Point& x, const Point& y) {
      return mat1(amplitude * std::exp(-std::abs(y(0))) * std::sin(x(0)));
    };
    k.domination = [amplitude](const Point& y) {
      return amplitude * std::exp(-std::abs(y(0)));
    };
    k.domination_tail = [amplitude](double T) { return 2.0 * amplitude * std::exp(-T); };
    k.kink_locus = [](const Point&) { return std::vector<std::vector<double>>{{0.0}}; };
    return k;
  }
  if (name == "tabulated") {
    const std::string file = ini.require("kernel", "file");
    std::ifstream is(file);
    if (!is) throw Error("cannot open tabulated kernel file " + file);
    return tabulated_kernel(is);
  }
  throw InvalidArgument(
      "unknown linear kernel '" + name +
      "' (known: exp_abs_diff, exp_saturating, exp_separable, mollified_exp_abs, "
      "oscillating, tabulated)");
}

inline UrysohnKernel scenario_urysohn_kernel(const IniFile& ini) {
  const std::string name = ini.require("kernel", "name");
  if (name == "urysohn_rational") return urysohn_rational();
  if (name == "urysohn_rational_decay") return urysohn_rational_decay();
  throw InvalidArgument("unknown Urysohn kernel '" + name +
                        "' (known: urysohn_rational, urysohn_rational_decay)");
}

inline Nonlinearity scenario_nonlinearity(const IniFile& ini) {
  const std::string name = ini.get_or("nonlinearity", "name", "identity");
  Nonlinearity F;
  F.value_dim = 1;
  if (name == "identity") {
    F.eval = [](const Point&, const Vec& z) { return z; };
    F.phi = [](double t) { return t; };
    return F;
  }
  if (name == "affine") {
    const double a = ini.number("nonlinearity", "a", 1.0);
    const double b = ini.number("nonlinearity", "b", 0.5);
    F.eval = [a, b](const Point&, const Vec& z) { return Vec(a * Vec::Ones(z.size()) + b * z); };
    F.phi = [a, b](double t) { return std::abs(a) + std::abs(b) * t; };
    F.modulus = [b](const Vec&, double eps) {
      return b == 0.0 ? eps : eps / std::abs(b);
    };
    return F;
  }
  if (name == "tanh") {
    F.eval = [](const Point&, const Vec& z) {
      Vec v = z;
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::tanh(v(i));
      return v;
    };
    F.phi = [](double t) { return std::min(t, 1.0); };
    F.modulus = [](const Vec&, double eps) { return eps; };
    return F;
  }
  throw InvalidArgument("unknown nonlinearity '" + name +
                        "' (known: identity, affine, tanh)");
}

struct PlanChoice {
  QuadraturePlan plan;
  bool auto_T = false;
};

/// Quadrature plan from [grids]: explicit T/panels, or `auto` truncation
/// certified against the declared kernel tail at eps_tail and panel width
/// of about half a unit.
inline PlanChoice scenario_plan(const IniFile& ini, const Domain& y_domain,
                                const std::function<double(double)>& tail,
                                double extra_margin = 0.0) {
  PlanChoice choice;
  const std::string t_text = ini.get_or("grids", "quadrature_T", "auto");
  const double eps_tail = ini.number("grids", "eps_tail", 1e-8);
  double T = 0.0;
  if (t_text == "auto") {
    if (!tail)
      throw InvalidArgument(
          "[grids] quadrature_T = auto requires kernel tail metadata");
    T = find_truncation_radius(tail, eps_tail) + extra_margin;
    choice.auto_T = true;
  } else {
    T = IniFile::to_double(t_text, "grids", "quadrature_T");
  }
  const std::string p_text = ini.get_or("grids", "panels", "auto");
  int panels = 0;
  if (p_text == "auto") {
    auto [a, b] = y_domain.truncated_axis(T);
    panels = std::max(8, static_cast<int>(std::ceil((b - a) / 0.5)));
  } else {
    panels = static_cast<int>(IniFile::to_double(p_text, "grids", "panels"));
  }
  choice.plan = build_plan(y_domain, T, panels);
  if (tail) choice.plan = choice.plan.attach_tail_bound(tail(T));
  return choice;
}

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ascoli
