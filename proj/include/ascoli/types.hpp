// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <string>

namespace ascoli {

using Vec = Eigen::VectorXd;    // value in the target space R^d
using Mat = Eigen::MatrixXd;    // linear map on the target space
using Point = Eigen::VectorXd;  // point of the domain, R^n

inline Point point1(double x) {
  Point p(1);
  p(0) = x;
  return p;
}

inline Vec vec1(double v) {
  Vec z(1);
  z(0) = v;
  return z;
}

inline Mat mat1(double k) {
  Mat m(1, 1);
  m(0, 0) = k;
  return m;
}

/// Euclidean operator norm (largest singular value); |k| for the 1x1 case.
inline double operator_norm(const Mat& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline std::string point_to_string(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p(i);
  }
  os << ")";
  return os.str();
}

}  // namespace ascoli
