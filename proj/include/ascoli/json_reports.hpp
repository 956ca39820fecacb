// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "ascoli/compactness.hpp"
#include "ascoli/kernel_checks.hpp"
#include "ascoli/quadrature.hpp"
#include "ascoli/solvers.hpp"

namespace ascoli {

using Json = nlohmann::ordered_json;

inline Json plan_summary(const QuadraturePlan& plan) {
  return Json{{"T", plan.truncation_radius},
              {"panels", plan.panels_per_axis},
              {"nodes", plan.node_count()},
              {"tail_bound", plan.tail_bound}};
}

inline Json point_json(const Point& p) {
  if (p.size() == 1) return Json(p(0));
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) arr.push_back(p(i));
  return arr;
}

inline Json condition_report_json(const ConditionReport& rep) {
  Json failures = Json::array();
  for (const auto& d : rep.directions) {
    if (!d.ok)
      failures.push_back(Json{{"v", point_json(d.v)}, {"note", d.note}});
  }
  return Json{{"condition", rep.condition},
              {"eps", rep.eps},
              {"directions", rep.directions.size()},
              {"T_sup", rep.sup_radius},
              {"certified", rep.certified},
              {"failures", failures}};
}

inline Json km_estimate_json(double M, const KMEstimate& est) {
  return Json{{"M", M},
              {"K_M_sampled", est.sampled},
              {"K_M_envelope", est.envelope_based},
              {"tail", est.tail},
              {"gap_flagged", est.gap_flagged}};
}

inline Json condition_b_json(const ConditionBReport& rep, double eps, double M) {
  return Json{{"condition", "B"},
              {"eps", eps},
              {"M", M},
              {"certified", rep.certified},
              {"T", rep.T},
              {"checked_tail", rep.checked_tail},
              {"far_horizon", rep.far_horizon},
              {"note", rep.note}};
}

inline Json radius_scan_json(const RadiusScan& scan) {
  Json roots = Json::array();
  for (double r : scan.roots) roots.push_back(r);
  Json j{{"roots", roots}, {"note", scan.note}};
  if (scan.t_star) {
    j["t_star"] = *scan.t_star;
    j["certificate_gap"] = scan.certificate_gap;
  } else {
    j["t_star"] = nullptr;
  }
  return j;
}

inline Json urysohn_radius_json(const UrysohnRadiusResult& res) {
  Json curve = Json::array();
  for (const auto& p : res.curve)
    curve.push_back(Json{{"M", p.M}, {"K_M", p.K_M}, {"ratio", p.ratio}});
  Json j{{"curve", curve}, {"note", res.note}};
  if (res.R)
    j["R"] = *res.R;
  else
    j["R"] = nullptr;
  return j;
}

inline Json fixed_point_json(const FixedPointReport& rep) {
  Json norms = Json::array(), residuals = Json::array();
  for (double v : rep.iterate_norms) norms.push_back(v);
  for (double v : rep.residual_history) residuals.push_back(v);
  return Json{{"radius", rep.radius},
              {"iterations", rep.iterations},
              {"alpha_initial", rep.alpha_initial},
              {"alpha_final", rep.alpha_final},
              {"residual", rep.residual},
              {"converged", rep.converged},
              {"ball_violations", rep.ball_violations},
              {"iterate_norms", norms},
              {"residual_history", residuals}};
}

inline Json certificate_json(const AACertificate& cert) {
  Json modulus = Json::array();
  for (const auto& row : cert.modulus)
    modulus.push_back(Json::array({point_json(row.x), row.delta, row.omega}));
  Json extension = Json::array();
  for (const auto& row : cert.extension)
    extension.push_back(Json::array({row.eps, row.T, row.delta}));
  return Json{{"M", cert.bound_M},
              {"modulus", modulus},
              {"extension", extension},
              {"sample_size", cert.sample_size},
              {"provenance", cert.provenance},
              {"note", "empirical certificate"}};
}

inline AACertificate certificate_from_json(const Json& j) {
  AACertificate cert;
  cert.bound_M = j.at("M").get<double>();
  cert.sample_size = j.at("sample_size").get<int>();
  if (j.contains("provenance")) cert.provenance = j["provenance"].get<std::string>();
  for (const auto& row : j.at("modulus")) {
    ModulusRow r;
    if (row.at(0).is_array()) {
      const auto& arr = row.at(0);
      r.x = Point(arr.size());
      for (std::size_t i = 0; i < arr.size(); ++i) r.x(i) = arr.at(i).get<double>();
    } else {
      r.x = point1(row.at(0).get<double>());
    }
    r.delta = row.at(1).get<double>();
    r.omega = row.at(2).get<double>();
    cert.modulus.push_back(std::move(r));
  }
  for (const auto& row : j.at("extension"))
    cert.extension.push_back(
        {row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
  return cert;
}

inline Json verification_json(const VerificationReport& rep) {
  Json v = Json::array();
  for (const auto& viol : rep.violations)
    v.push_back(Json{{"kind", viol.kind},
                     {"eps", viol.eps},
                     {"member_i", viol.member_i},
                     {"member_j", viol.member_j},
                     {"observed", viol.observed},
                     {"allowed", viol.allowed},
                     {"detail", viol.detail}});
  return Json{{"pass", rep.pass},
              {"holdout_bound", rep.holdout_bound},
              {"violations", v}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open output file " + path);
  os << text;
  if (!os) throw Error("failed writing " + path);
}

inline void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace ascoli
