#pragma once

// Length-filtration thresholds: nonnegative linear combinations of named
// extremal lengths plus a constant. A threshold c stands for the open level
// "every c' > c", so the zero expression is the positive infinitesimal 0+.

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stringcap/errors.hpp"

namespace stringcap::stralg {

class FiltExpr {
 public:
  FiltExpr() = default;

  static FiltExpr zero_plus() { return FiltExpr(); }
  static FiltExpr constant(double c) {
    if (!(c >= 0.0) || std::isinf(c)) throw InvalidInputError("filtration constants must be finite and >= 0");
    FiltExpr f;
    f.constant_ = c;
    return f;
  }
  static FiltExpr symbol(const std::string& name, double coefficient = 1.0) {
    if (name.empty()) throw InvalidInputError("filtration symbol needs a name");
    if (!(coefficient > 0.0)) throw InvalidInputError("filtration coefficients must be positive");
    FiltExpr f;
    f.coeffs_[name] = coefficient;
    return f;
  }

  const std::map<std::string, double>& coefficients() const { return coeffs_; }
  double constant_part() const { return constant_; }
  bool is_zero_plus() const { return coeffs_.empty() && constant_ == 0.0; }

  friend FiltExpr operator+(const FiltExpr& a, const FiltExpr& b) {
    FiltExpr r = a;
    for (const auto& [s, c] : b.coeffs_) r.coeffs_[s] += c;
    r.constant_ += b.constant_;
    return r;
  }
  FiltExpr& operator+=(const FiltExpr& b) { return *this = *this + b; }

  friend bool operator==(const FiltExpr&, const FiltExpr&) = default;

  /// True when *this <= other for every nonnegative assignment of the symbols.
  bool dominated_by(const FiltExpr& other) const {
    for (const auto& [s, c] : coeffs_) {
      auto it = other.coeffs_.find(s);
      if (it == other.coeffs_.end() || c > it->second) return false;
    }
    return constant_ <= other.constant_;
  }

  double evaluate(const std::map<std::string, double>& bindings) const {
    double v = constant_;
    for (const auto& [s, c] : coeffs_) {
      auto it = bindings.find(s);
      if (it == bindings.end()) throw UnboundSymbolError(s);
      v += c * it->second;
    }
    return v;
  }

  std::string to_string() const {
    if (is_zero_plus()) return "0+";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : coeffs_) {
      if (!first) os << " + ";
      first = false;
      if (c != 1.0) os << c << "*";
      os << s;
    }
    if (constant_ != 0.0) {
      if (!first) os << " + ";
      os << constant_;
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["symbols"] = nlohmann::json::object();
    for (const auto& [s, c] : coeffs_) j["symbols"][s] = c;
    j["constant"] = constant_;
    j["text"] = to_string();
    return j;
  }

  static FiltExpr from_json(const nlohmann::json& j) {
    FiltExpr f = constant(j.at("constant").get<double>());
    for (const auto& [s, c] : j.at("symbols").items()) f = f + symbol(s, c.get<double>());
    return f;
  }

 private:
  std::map<std::string, double> coeffs_;
  double constant_ = 0.0;
};

}  // namespace stringcap::stralg
