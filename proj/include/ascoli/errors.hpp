// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ascoli {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violation: bad sizes, mismatched grids, nonpositive radii.
class InvalidArgument : public Error {
  using Error::Error;
};

/// A point lies outside the domain it is evaluated on.
class DomainError : public Error {
  using Error::Error;
};

/// A computation produced a non-finite value.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, const std::string& context = {})
      : Error(context.empty() ? what : what + " [" + context + "]") {}
};

/// An iterative search ran out of budget. `best` holds the last value seen
/// (a scalar summary when the underlying value is vector-valued).
class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& what, double best = 0.0)
      : Error(what), best_(best) {}
  double best() const noexcept { return best_; }

 private:
  double best_;
};

/// The quadrature plan's truncation radius is too small for the requested
/// tail budget. `required_radius` is a radius that would satisfy it.
class TruncationInsufficient : public Error {
 public:
  TruncationInsufficient(const std::string& what, double required)
      : Error(what + " (required radius ~ " + std::to_string(required) + ")"),
        required_(required) {}
  double required_radius() const noexcept { return required_; }

 private:
  double required_;
};

/// The operation needs metadata the object does not declare.
class Unsupported : public Error {
  using Error::Error;
};

/// Scenario or CSV input could not be parsed; carries a 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Dense solve failed or the system is too ill-conditioned to trust.
class LinearSolveError : public Error {
 public:
  LinearSolveError(const std::string& what, double cond)
      : Error(what + " (condition estimate " + std::to_string(cond) + ")"),
        cond_(cond) {}
  double condition_estimate() const noexcept { return cond_; }

 private:
  double cond_;
};

}  // namespace ascoli
