#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stringcap {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (NaN coordinates, bad parameters, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A point or vector was evaluated against a domain living on another chart.
class ChartMismatchError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, double smallest_singular_value)
      : Error(what), smallest_singular_value_(smallest_singular_value) {}
  double smallest_singular_value() const { return smallest_singular_value_; }

 private:
  double smallest_singular_value_;
};

/// An iterative maximizer ran out of iterations before meeting its tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_value, double residual)
      : Error(what), best_value_(best_value), residual_(residual) {}
  double best_value() const { return best_value_; }
  double residual() const { return residual_; }

 private:
  double best_value_;
  double residual_;
};

class InvalidLoopError : public Error {
 public:
  using Error::Error;
};

/// The support function was infinite at a quadrature node of a loop.
class InfiniteSupportError : public Error {
 public:
  InfiniteSupportError(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

/// A loop inside a family has infinite length.
class InfiniteLengthError : public Error {
 public:
  InfiniteLengthError(const std::string& what, std::vector<double> params, double t)
      : Error(what), params_(std::move(params)), t_(t) {}
  const std::vector<double>& params() const { return params_; }
  double t() const { return t_; }

 private:
  std::vector<double> params_;
  double t_;
};

class BasepointMismatchError : public Error {
 public:
  using Error::Error;
};

/// A derivation needs a rewrite rule whose axiom the scenario does not carry.
class MissingAxiomError : public Error {
 public:
  MissingAxiomError(const std::string& what, std::vector<std::string> rules)
      : Error(what), rules_(std::move(rules)) {}
  const std::vector<std::string>& rules() const { return rules_; }

 private:
  std::vector<std::string> rules_;
};

/// Two classes cannot be combined under the scenario's declared tables.
class IncompatibleBindingsError : public Error {
 public:
  using Error::Error;
};

/// A rewrite rule was applied to terms that do not match its pattern.
class RuleMismatchError : public Error {
 public:
  using Error::Error;
};

class UnboundSymbolError : public Error {
 public:
  explicit UnboundSymbolError(const std::string& symbol)
      : Error("unbound filtration symbol '" + symbol + "'"), symbol_(symbol) {}
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stringcap
