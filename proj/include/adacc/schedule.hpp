#pragma once

#include <adacc/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace adacc {

// A shell half-width schedule {delta_X}. Power and constant-then-decay forms are
// evaluated in double and the resulting dyadic rational is used exactly in all
// threshold comparisons; table entries keep whatever exact rationals they were
// built from.
class DeltaSchedule {
 public:
  enum class Form { power, table, constant_then_decay };

  static DeltaSchedule power(double c, double alpha, std::string id = "") {
    if (!(c > 0)) throw validation_error("power schedule: c must be positive");
    if (!(alpha > 0)) throw validation_error("power schedule: alpha must be positive");
    DeltaSchedule s;
    s.form_ = Form::power;
    s.c_ = c;
    s.alpha_ = alpha;
    s.id_ = id.empty() ? "power(c=" + format_real(c) + ",alpha=" + format_real(alpha) + ")" : std::move(id);
    return s;
  }

  // delta_X = c for X < X0, then c*(X0/X)^alpha
  static DeltaSchedule constant_then_decay(double c, long X0, double alpha, std::string id = "") {
    if (!(c > 0) || !(alpha > 0) || X0 < 1)
      throw validation_error("constant_then_decay schedule: need c>0, alpha>0, X0>=1");
    DeltaSchedule s;
    s.form_ = Form::constant_then_decay;
    s.c_ = c;
    s.alpha_ = alpha;
    s.x0_ = X0;
    s.id_ = id.empty() ? "const-decay(c=" + format_real(c) + ",X0=" + std::to_string(X0) +
                             ",alpha=" + format_real(alpha) + ")"
                       : std::move(id);
    return s;
  }

  // Stepwise-constant: delta_X = value of the last breakpoint with X_i <= X;
  // below the first breakpoint the first value applies.
  static DeltaSchedule table(std::vector<std::pair<long, Rational>> steps, std::string id = "") {
    if (steps.empty()) throw validation_error("table schedule: no breakpoints");
    std::sort(steps.begin(), steps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [x, d] : steps)
      if (!(d > 0)) throw validation_error("table schedule: deltas must be positive");
    // eventually decreasing: non-increasing from the midpoint on
    for (std::size_t i = steps.size() / 2; i + 1 < steps.size(); ++i)
      if (steps[i + 1].second > steps[i].second)
        throw validation_error("table schedule: values must be eventually decreasing");
    DeltaSchedule s;
    s.form_ = Form::table;
    s.steps_ = std::move(steps);
    s.id_ = id.empty() ? "table(" + std::to_string(s.steps_.size()) + " steps)" : std::move(id);
    return s;
  }

  Form form() const { return form_; }
  const std::string& id() const { return id_; }
  const std::vector<std::pair<long, Rational>>& steps() const { return steps_; }

  Rational at(long X) const {
    if (X < 1) throw validation_error("schedule evaluated at X < 1");
    switch (form_) {
      case Form::power:
        return rational_from_double(c_ * std::pow(static_cast<double>(X), -alpha_));
      case Form::constant_then_decay: {
        if (X < x0_) return rational_from_double(c_);
        return rational_from_double(
            c_ * std::pow(static_cast<double>(x0_) / static_cast<double>(X), alpha_));
      }
      case Form::table: {
        Rational v = steps_.front().second;
        for (const auto& [x, d] : steps_) {
          if (x <= X) v = d;
          else break;
        }
        return v;
      }
    }
    throw computation_error("unreachable schedule form");
  }

 private:
  Form form_ = Form::power;
  double c_ = 1.0, alpha_ = 1.0;
  long x0_ = 1;
  std::vector<std::pair<long, Rational>> steps_;
  std::string id_;
};

}  // namespace adacc
