#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm {

/// Time coefficient k(t) with its derivative, from a closed-form catalogue.
///
/// Every schedule is checked on construction: k(0) > 0 and k'(t) >= 0 on a
/// probe set covering [0, 1000].
class CoefficientSchedule {
 public:
  enum class Kind { constant, exponential, power_of_base, arctan_ramp, table };

  /// k(t) = a
  static CoefficientSchedule constant(double a) { return CoefficientSchedule(Kind::constant, {a}); }
  /// k(t) = a * exp(b t)
  static CoefficientSchedule exponential(double a, double b) {
    return CoefficientSchedule(Kind::exponential, {a, b});
  }
  /// k(t) = a * base^(c t)
  static CoefficientSchedule power_of_base(double a, double base, double c) {
    require(base > 0.0, "power-of-base schedule needs a positive base");
    return CoefficientSchedule(Kind::power_of_base, {a, base, c});
  }
  /// k(t) = a * (1 + (2/pi) arctan t)
  static CoefficientSchedule arctan_ramp(double a) { return CoefficientSchedule(Kind::arctan_ramp, {a}); }
  /// Piecewise-linear through (t_i, k_i), constant beyond the ends.
  static CoefficientSchedule table(std::vector<double> times, std::vector<double> values) {
    require(times.size() == values.size() && !times.empty(), "schedule table needs matching non-empty columns");
    require(std::is_sorted(times.begin(), times.end()) &&
                std::adjacent_find(times.begin(), times.end()) == times.end(),
            "schedule table times must be strictly increasing");
    CoefficientSchedule k(Kind::table, {}, std::move(times), std::move(values));
    return k;
  }

  /// Parses "const:a", "exp:a,b", "pow:a,base,c", "arctan:a" or
  /// "table:t0:k0,t1:k1,...".
  static CoefficientSchedule parse(const std::string& text) {
    const auto colon = text.find(':');
    require(colon != std::string::npos, "schedule '" + text + "' has no kind prefix");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "table") {
      std::vector<double> ts, ks;
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto c = item.find(':');
        require(c != std::string::npos, "schedule table entry '" + item + "' is not t:k");
        ts.push_back(to_real(item.substr(0, c)));
        ks.push_back(to_real(item.substr(c + 1)));
      }
      return table(std::move(ts), std::move(ks));
    }
    std::vector<double> args;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(to_real(item));
    auto want = [&](std::size_t n) {
      require(args.size() == n, "schedule '" + text + "' expects " + std::to_string(n) + " parameters");
    };
    if (kind == "const") { want(1); return constant(args[0]); }
    if (kind == "exp") { want(2); return exponential(args[0], args[1]); }
    if (kind == "pow") { want(3); return power_of_base(args[0], args[1], args[2]); }
    if (kind == "arctan") { want(1); return arctan_ramp(args[0]); }
    throw Error(ErrorKind::invalid_argument, "unknown schedule kind '" + kind + "'");
  }

  double operator()(double t) const { return value(t); }

  double value(double t) const {
    switch (kind_) {
      case Kind::constant: return p_[0];
      case Kind::exponential: return p_[0] * std::exp(p_[1] * t);
      case Kind::power_of_base: return p_[0] * std::pow(p_[1], p_[2] * t);
      case Kind::arctan_ramp: return p_[0] * (1.0 + 2.0 / std::numbers::pi * std::atan(t));
      case Kind::table: return table_value(t);
    }
    return 0.0;
  }

  double derivative(double t) const {
    switch (kind_) {
      case Kind::constant: return 0.0;
      case Kind::exponential: return p_[0] * p_[1] * std::exp(p_[1] * t);
      case Kind::power_of_base: return p_[0] * p_[2] * std::log(p_[1]) * std::pow(p_[1], p_[2] * t);
      case Kind::arctan_ramp: return p_[0] * 2.0 / std::numbers::pi / (1.0 + t * t);
      case Kind::table: return table_slope(t);
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }

 private:
  CoefficientSchedule(Kind kind, std::vector<double> params, std::vector<double> ts = {},
                      std::vector<double> ks = {})
      : kind_(kind), p_(std::move(params)), ts_(std::move(ts)), ks_(std::move(ks)) {
    for (double v : p_) require(std::isfinite(v), "schedule parameters must be finite");
    for (double v : ks_) require(std::isfinite(v), "schedule table values must be finite");
    require(value(0.0) > 0.0, "coefficient schedule needs k(0) > 0");
    for (double t : probe_times()) {
      require(derivative(t) >= 0.0, "coefficient schedule must be nondecreasing (k'(t) >= 0)");
    }
  }

  static std::vector<double> probe_times() {
    std::vector<double> ts;
    for (int n = 0; n <= 200; ++n) ts.push_back(1000.0 * std::pow(double(n) / 200.0, 3.0));
    return ts;
  }

  static double to_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == s.size() && !s.empty(), "'" + s + "' is not a number");
    return v;
  }

  std::size_t segment(double t) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    return std::size_t(it - ts_.begin());
  }

  double table_value(double t) const {
    if (t <= ts_.front()) return ks_.front();
    if (t >= ts_.back()) return ks_.back();
    const std::size_t hi = segment(t);
    const double w = (t - ts_[hi - 1]) / (ts_[hi] - ts_[hi - 1]);
    return (1.0 - w) * ks_[hi - 1] + w * ks_[hi];
  }

  double table_slope(double t) const {
    if (ts_.size() < 2 || t < ts_.front() || t >= ts_.back()) return 0.0;
    const std::size_t hi = segment(t);
    return (ks_[hi] - ks_[hi - 1]) / (ts_[hi] - ts_[hi - 1]);
  }

  Kind kind_;
  std::vector<double> p_;
  std::vector<double> ts_, ks_;
};

}  // namespace thinfilm
