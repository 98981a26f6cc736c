#pragma once

#include <adacc/counting.hpp>
#include <adacc/microcanonical.hpp>
#include <adacc/model.hpp>
#include <adacc/schedule.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace adacc {

enum class QuantityTag { shell, downward };

inline std::string to_string(QuantityTag t) { return t == QuantityTag::shell ? "shell" : "downward"; }

struct EntropyPoint {
  long X = 0;
  double s = 0.0;   // (1/X) ln D
  BigInt D;
  bool boundary_hit = false;
};

struct EntropySequence {
  std::vector<EntropyPoint> points;
  std::vector<std::pair<long, std::string>> dropped;  // empty-shell scales, flagged
  std::string schedule_id;                            // "downward" for the downward tag
  QuantityTag tag = QuantityTag::shell;
  ShellConvention convention;
};

enum class EstimateMethod { last_point, richardson, affine, tail_max, tail_min };

inline std::string to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::last_point: return "last-point";
    case EstimateMethod::richardson: return "richardson";
    case EstimateMethod::affine: return "affine";
    case EstimateMethod::tail_max: return "tail-max";
    case EstimateMethod::tail_min: return "tail-min";
  }
  return "?";
}

struct LimitEstimate {
  double value = 0.0;
  double error_bar = 0.0;  // the method's own residual, reproducibly computed
  EstimateMethod method = EstimateMethod::last_point;
  std::vector<long> tail_window;
  std::string schedule_id;
};

// s_X = (1/X) ln D with D the shell dimension under the schedule, or the
// downward dimension when no schedule is given. Scales with empty shells are
// dropped and flagged; all-empty is an error.
inline EntropySequence entropy_density_sequence(const ModelSystem& model, const Macrostate& a,
                                                const std::optional<DeltaSchedule>& schedule,
                                                const std::vector<long>& scales,
                                                ShellConvention conv = {}) {
  if (scales.empty()) throw validation_error("entropy_density_sequence: no scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (scales[i] <= scales[i - 1])
      throw validation_error("entropy_density_sequence: scales must be strictly increasing");

  EntropySequence seq;
  seq.tag = schedule ? QuantityTag::shell : QuantityTag::downward;
  seq.schedule_id = schedule ? schedule->id() : "downward";
  seq.convention = conv;
  for (long X : scales) {
    auto counter = make_counter(model, X);
    BoundaryFlag flag;
    BigInt D;
    if (schedule) {
      D = shell_dimension(*counter, a, schedule->at(X), X, conv, model.value_unit(), &flag);
    } else {
      D = downward_dimension(*counter, a, X, model.value_unit(), &flag);
    }
    if (D < 1) {
      seq.dropped.emplace_back(X, "empty shell");
      continue;
    }
    seq.points.push_back({X, log_big(D) / static_cast<double>(X), D, flag.hit});
  }
  if (seq.points.empty())
    throw computation_error("entropy_density_sequence: all shells empty for schedule " +
                            seq.schedule_id);
  return seq;
}

namespace detail {

// least squares via normal equations; k <= 3, long double is plenty here
inline std::vector<double> solve_least_squares(const std::vector<std::array<double, 3>>& rows,
                                               const std::vector<double>& y, int k) {
  long double G[3][3] = {};
  long double b[3] = {};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int p = 0; p < k; ++p) {
      b[p] += static_cast<long double>(rows[i][p]) * y[i];
      for (int q = 0; q < k; ++q) G[p][q] += static_cast<long double>(rows[i][p]) * rows[i][q];
    }
  }
  // gaussian elimination with partial pivoting
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::fabs(static_cast<double>(G[perm[r]][col])) >
          std::fabs(static_cast<double>(G[perm[piv]][col])))
        piv = r;
    std::swap(perm[col], perm[piv]);
    const long double d = G[perm[col]][col];
    if (d == 0.0L) throw computation_error("degenerate least-squares system");
    for (int r = col + 1; r < k; ++r) {
      const long double f = G[perm[r]][col] / d;
      for (int c = col; c < k; ++c) G[perm[r]][c] -= f * G[perm[col]][c];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  std::vector<double> x(k);
  for (int col = k - 1; col >= 0; --col) {
    long double acc = b[perm[col]];
    for (int c = col + 1; c < k; ++c) acc -= G[perm[col]][c] * x[c];
    x[col] = static_cast<double>(acc / G[perm[col]][col]);
  }
  return x;
}

}  // namespace detail

// Finite-size limit proxy. last-point: the final value, error = last step.
// richardson: eliminates a c/X correction from the last two points.
// affine: least-squares intercept of s_X = b0 + b1 (ln X)/X + b2 / X
// (the 1/X regressor is dropped when only two points are available).
inline LimitEstimate estimate_limit(const EntropySequence& seq, EstimateMethod method) {
  const auto& pts = seq.points;
  if (pts.empty()) throw validation_error("estimate_limit: empty sequence");
  LimitEstimate est;
  est.method = method;
  est.schedule_id = seq.schedule_id;
  for (const auto& p : pts) est.tail_window.push_back(p.X);

  switch (method) {
    case EstimateMethod::last_point: {
      est.value = pts.back().s;
      est.error_bar = pts.size() >= 2 ? std::fabs(pts.back().s - pts[pts.size() - 2].s) : 0.0;
      return est;
    }
    case EstimateMethod::richardson: {
      if (pts.size() < 2) throw validation_error("richardson needs at least 2 points");
      const auto& p1 = pts[pts.size() - 2];
      const auto& p2 = pts.back();
      const double X1 = static_cast<double>(p1.X), X2 = static_cast<double>(p2.X);
      est.value = (X2 * p2.s - X1 * p1.s) / (X2 - X1);
      est.error_bar = std::fabs(est.value - p2.s);
      return est;
    }
    case EstimateMethod::affine: {
      if (pts.size() < 2) throw validation_error("affine fit needs at least 2 points");
      const int k = pts.size() == 2 ? 2 : 3;
      std::vector<std::array<double, 3>> rows;
      std::vector<double> y;
      for (const auto& p : pts) {
        const double X = static_cast<double>(p.X);
        rows.push_back({1.0, std::log(X) / X, 1.0 / X});
        y.push_back(p.s);
      }
      const auto coef = detail::solve_least_squares(rows, y, k);
      est.value = coef[0];
      double maxres = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        double fit = 0.0;
        for (int p = 0; p < k; ++p) fit += coef[p] * rows[i][p];
        maxres = std::max(maxres, std::fabs(fit - y[i]));
      }
      est.error_bar = maxres;
      return est;
    }
    default:
      throw validation_error("estimate_limit: tail-max/tail-min are upper_lower proxies");
  }
}

struct UpperLowerResult {
  LimitEstimate upper;  // max over the family of limsup proxies
  LimitEstimate lower;  // max over the family of liminf proxies
  std::vector<LimitEstimate> per_schedule_upper, per_schedule_lower;
};

namespace detail {

inline EntropySequence tail_of(const EntropySequence& seq, double tail_fraction) {
  const std::size_t n = seq.points.size();
  std::size_t keep = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
  if (keep < 1) keep = 1;
  if (keep > n) keep = n;
  EntropySequence t = seq;
  t.points.assign(seq.points.end() - keep, seq.points.end());
  return t;
}

}  // namespace detail

// limsup/liminf proxies per schedule: max/min of s_X over the declared tail
// window; with an extrapolation method the proxy pair becomes
// estimate.value +/- estimate.error_bar. upper/lower take the max over the
// family, mirroring the sup over schedules in the two-function criterion.
inline UpperLowerResult upper_lower_entropy(const ModelSystem& model, const Macrostate& a,
                                            const std::vector<DeltaSchedule>& family,
                                            const std::vector<long>& scales, double tail_fraction,
                                            ShellConvention conv = {},
                                            std::optional<EstimateMethod> extrapolate = {}) {
  if (family.empty()) throw validation_error("upper_lower_entropy: empty schedule family");
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
    throw validation_error("upper_lower_entropy: tail_fraction must be in (0, 1]");

  UpperLowerResult res;
  for (const auto& sched : family) {
    const auto seq = entropy_density_sequence(model, a, sched, scales, conv);
    const auto tail = detail::tail_of(seq, tail_fraction);
    if (tail.points.empty()) throw computation_error("upper_lower_entropy: empty tail window");

    LimitEstimate up, lo;
    up.schedule_id = lo.schedule_id = sched.id();
    for (const auto& p : tail.points) {
      up.tail_window.push_back(p.X);
      lo.tail_window.push_back(p.X);
    }
    if (extrapolate) {
      const auto est = estimate_limit(tail, *extrapolate);
      up.value = est.value + est.error_bar;
      lo.value = est.value - est.error_bar;
      up.error_bar = lo.error_bar = est.error_bar;
      up.method = lo.method = *extrapolate;
    } else {
      double mx = tail.points.front().s, mn = tail.points.front().s;
      for (const auto& p : tail.points) {
        mx = std::max(mx, p.s);
        mn = std::min(mn, p.s);
      }
      up.value = mx;
      lo.value = mn;
      up.error_bar = lo.error_bar = 0.5 * (mx - mn);
      up.method = EstimateMethod::tail_max;
      lo.method = EstimateMethod::tail_min;
    }
    res.per_schedule_upper.push_back(up);
    res.per_schedule_lower.push_back(lo);
  }

  res.upper = res.per_schedule_upper.front();
  for (const auto& e : res.per_schedule_upper)
    if (e.value > res.upper.value) res.upper = e;
  res.lower = res.per_schedule_lower.front();
  for (const auto& e : res.per_schedule_lower)
    if (e.value > res.lower.value) res.lower = e;
  return res;
}

// f = s_X - reference. Diagnostic only: the reference is itself an estimate,
// so this residual inherits its uncertainty.
inline double residual_f(const ModelSystem& model, const Macrostate& a, const DeltaSchedule& schedule,
                         long X, const LimitEstimate& reference, ShellConvention conv = {}) {
  auto counter = make_counter(model, X);
  const BigInt D = shell_dimension(*counter, a, schedule.at(X), X, conv, model.value_unit());
  if (D < 1) throw computation_error("residual_f: empty shell at X=" + std::to_string(X));
  return log_big(D) / static_cast<double>(X) - reference.value;
}

// Admissible-schedule construction: for each epsilon_m, X_eps is the smallest
// tested scale where (1/X) ln D_down[a(1-eps)] - (1/X) ln D_down[a(1+eps)]
// drops to -1/sqrt(X) or below; step starts are X_m = max(X_eps_m, X_{m-1}+1).
inline DeltaSchedule delta0_schedule(const ModelSystem& model, const Macrostate& a,
                                     const std::vector<Rational>& epsilons,
                                     const std::vector<long>& scales) {
  if (epsilons.empty()) throw validation_error("delta0_schedule: empty epsilon list");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0)) throw validation_error("delta0_schedule: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw validation_error("delta0_schedule: epsilons must be strictly decreasing");
  }
  if (scales.empty()) throw validation_error("delta0_schedule: no scales");

  std::vector<std::pair<long, Rational>> steps;
  long prev_start = 0;
  for (const auto& eps : epsilons) {
    long found = -1;
    for (long X : scales) {
      auto counter = make_counter(model, X);
      const BigInt Dm =
          downward_dimension(*counter, a.scaled(Rational(1) - eps), X, model.value_unit());
      const BigInt Dp =
          downward_dimension(*counter, a.scaled(Rational(1) + eps), X, model.value_unit());
      if (Dm < 1 || Dp < 1) continue;
      const double gap = (log_big(Dm) - log_big(Dp)) / static_cast<double>(X);
      if (gap <= -1.0 / std::sqrt(static_cast<double>(X))) {
        found = X;
        break;
      }
    }
    if (found < 0)
      throw computation_error("delta0_schedule: gap condition never met for epsilon=" +
                              format_rational(eps) + " within tested scales");
    const long start = steps.empty() ? found : std::max(found, prev_start + 1);
    steps.emplace_back(start, eps);
    prev_start = start;
  }
  return DeltaSchedule::table(std::move(steps), "delta0");
}

struct ScreeningResult {
  bool passed = false;
  std::vector<double> slopes;  // per observable
  std::string note;
};

// Validates the strictly-increasing hypothesis numerically: the downward
// affine estimate must grow under a small positive bump of each component.
inline ScreeningResult strict_increase_screen(const ModelSystem& model, const Macrostate& a,
                                              const std::vector<long>& scales,
                                              const Rational& bump = Rational(1, 64),
                                              double slope_threshold = 1e-6) {
  ScreeningResult res;
  const auto base_seq = entropy_density_sequence(model, a, std::nullopt, scales);
  const double base = estimate_limit(base_seq, EstimateMethod::affine).value;
  res.passed = true;
  for (int l = 0; l < a.size(); ++l) {
    Macrostate bumped = a;
    bumped.densities[l] += bump;
    double slope;
    try {
      const auto seq = entropy_density_sequence(model, bumped, std::nullopt, scales);
      slope = (estimate_limit(seq, EstimateMethod::affine).value - base) / to_double(bump);
    } catch (const computation_error&) {
      slope = 0.0;
    }
    res.slopes.push_back(slope);
    if (!(slope >= slope_threshold)) {
      res.passed = false;
      res.note += (res.note.empty() ? "" : "; ") + std::string("observable ") + std::to_string(l) +
                  " slope " + format_real(slope) + " below threshold";
    }
  }
  if (res.note.empty()) res.note = "strict-increase screening passed (convexity not checked)";
  return res;
}

}  // namespace adacc
