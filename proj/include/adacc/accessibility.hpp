#pragma once

#include <adacc/counting.hpp>
#include <adacc/microcanonical.hpp>
#include <adacc/regularize.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace adacc {

// p majorizes q: every partial sum of p's decreasingly sorted entries dominates
// q's. Shorter vector is zero-padded; comparisons allow `tol` slack.
inline bool majorizes(std::vector<double> p, std::vector<double> q, double tol = 1e-12) {
  for (double v : p)
    if (v < -tol) throw validation_error("majorizes: negative entry in p");
  for (double v : q)
    if (v < -tol) throw validation_error("majorizes: negative entry in q");
  auto total = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  };
  if (std::fabs(total(p) - 1.0) > tol) throw validation_error("majorizes: p does not sum to 1");
  if (std::fabs(total(q) - 1.0) > tol) throw validation_error("majorizes: q does not sum to 1");
  const std::size_t n = std::max(p.size(), q.size());
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  std::sort(p.begin(), p.end(), std::greater<>());
  std::sort(q.begin(), q.end(), std::greater<>());
  double sp = 0, sq = 0;
  for (std::size_t m = 0; m < n; ++m) {
    sp += p[m];
    sq += q[m];
    if (sp < sq - tol) return false;
  }
  return true;
}

// Flat-to-flat convertibility reduces to dimension comparison: the flat state
// on D levels majorizes the flat state on D' levels iff D <= D'.
inline bool flat_convertible_at_scale(const BigInt& D, const BigInt& D_prime) {
  if (D < 1 || D_prime < 1) throw validation_error("flat_convertible_at_scale: dimensions must be >= 1");
  return D <= D_prime;
}

struct ExtRational {
  enum class Kind { finite, pos_inf } kind = Kind::finite;
  Rational value;

  static ExtRational finite(Rational v) { return {Kind::finite, std::move(v)}; }
  static ExtRational pos_inf() { return {Kind::pos_inf, Rational(0)}; }
  bool is_finite() const { return kind == Kind::finite; }
};

// Admissible-eta set A_X = { eta : D_lo <= D_down[a'(1+eta)] <= D_hi } as a
// half-open interval [lo, hi); endpoints are exact jump locations of the step
// function eta -> D_down. When the step jumps over the band, `empty` is set and
// eta_boundary is the jump location.
struct EtaWindow {
  long X = 0;
  ExtRational lo, hi;
  bool empty = false;
  Rational eta_boundary;  // defined only when empty
  BigInt D_lo, D_hi;      // the band, for evidence
};

namespace detail {

// D_down[a'(1+eta)] for rational eta
inline BigInt downward_at_eta(const DimensionCounter& counter, const Macrostate& ap,
                              const Rational& eta, long X, const std::vector<Rational>& unit) {
  return downward_dimension(counter, ap.scaled(Rational(1) + eta), X, unit);
}

}  // namespace detail

inline EtaWindow eta_window(const ModelSystem& model, const Macrostate& a, const Macrostate& a_prime,
                            const Rational& delta, long X) {
  if (a.size() != model.num_observables() || a_prime.size() != model.num_observables())
    throw validation_error("eta_window: macrostate arity mismatch");
  for (const auto& d : a_prime.densities)
    if (d < 0) throw validation_error("eta_window: multiplicative scan needs nonnegative densities");

  auto counter = make_counter(model, X);
  const auto& unit = model.value_unit();

  EtaWindow w;
  w.X = X;
  w.D_lo = downward_dimension(*counter, a.scaled(Rational(1) - delta), X, unit);
  w.D_hi = downward_dimension(*counter, a.scaled(Rational(1) + delta), X, unit);
  if (w.D_lo == 0)
    throw computation_error("eta_window: degenerate lower bound, D_down at a(1-delta) is zero");

  // Exact jump locations: X*a'_l*(1+eta)/unit_l crosses an integer eigenvalue m.
  std::vector<Rational> crit;
  for (int l = 0; l < model.num_observables(); ++l) {
    if (a_prime.densities[l] == 0) continue;
    const Rational denom = Rational(X) * a_prime.densities[l] / unit[l];
    for (std::int64_t m = counter->value_min(l); m <= counter->value_max(l); ++m)
      crit.push_back(Rational(m) / denom - 1);
  }
  if (crit.empty())
    throw computation_error("eta_window: a' has no positive component, step scan undefined");
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

  auto D_at = [&](std::size_t i) {
    return detail::downward_at_eta(*counter, a_prime, crit[i], X, unit);
  };
  // first grid index where D >= D_lo (exists: D at the last grid point is the
  // full dimension)
  std::size_t lo_i = 0, hi_i = crit.size() - 1;
  while (lo_i < hi_i) {
    const std::size_t mid = (lo_i + hi_i) / 2;
    if (D_at(mid) >= w.D_lo) hi_i = mid;
    else lo_i = mid + 1;
  }
  const std::size_t first_ge = lo_i;
  const BigInt D_first = D_at(first_ge);
  if (D_first > w.D_hi) {
    w.empty = true;
    w.eta_boundary = crit[first_ge];
    return w;
  }
  w.lo = ExtRational::finite(crit[first_ge]);

  // first grid index where D > D_hi; absent when the bound saturates the space
  if (!(counter->total_dimension() > w.D_hi)) {
    w.hi = ExtRational::pos_inf();
    return w;
  }
  lo_i = first_ge;
  hi_i = crit.size() - 1;
  while (lo_i < hi_i) {
    const std::size_t mid = (lo_i + hi_i) / 2;
    if (D_at(mid) > w.D_hi) hi_i = mid;
    else lo_i = mid + 1;
  }
  w.hi = ExtRational::finite(crit[lo_i]);
  return w;
}

// eta(+/-) of the proof: thirds of the window on nonempty A_X, boundary +/- 1/X
// on empty A_X.
inline std::pair<Rational, Rational> eta_plus_minus(const EtaWindow& w) {
  if (w.empty) {
    return {w.eta_boundary + Rational(1, w.X), w.eta_boundary - Rational(1, w.X)};
  }
  if (!w.lo.is_finite() || !w.hi.is_finite())
    throw computation_error("eta_plus_minus: saturated window has no finite endpoints");
  const Rational& lo = w.lo.value;
  const Rational& hi = w.hi.value;
  return {lo / 3 + hi * Rational(2, 3), lo * Rational(2, 3) + hi / 3};
}

struct DeltaPrimeRow {
  long X = 0;
  Rational delta;
  std::optional<EtaWindow> window;
  Rational eta_plus, eta_minus;
  Rational delta_prime;
  bool sandwich_upper = false;  // D_down[a(1+delta)] < D_down[a'(1+delta')]
  bool sandwich_lower = false;  // D_down[a'(1-delta')] < D_down[a(1-delta)]
  bool ok = false;
  std::string note;
};

struct DeltaPrimeResult {
  std::vector<DeltaPrimeRow> rows;
  std::optional<DeltaSchedule> schedule;  // table over the successful scales
  bool all_ok = false;
};

// delta'_X = 4 max(|eta+|, |eta-|) per scale, with the two sandwich
// inequalities re-checked by independent dimension counts.
inline DeltaPrimeResult construct_delta_prime(const ModelSystem& model, const Macrostate& a,
                                              const Macrostate& a_prime, const DeltaSchedule& schedule,
                                              const std::vector<long>& scales) {
  DeltaPrimeResult res;
  const auto& unit = model.value_unit();
  for (long X : scales) {
    DeltaPrimeRow row;
    row.X = X;
    row.delta = schedule.at(X);
    try {
      row.window = eta_window(model, a, a_prime, row.delta, X);
      auto [ep, em] = eta_plus_minus(*row.window);
      row.eta_plus = ep;
      row.eta_minus = em;
      row.delta_prime = 4 * std::max(boost::multiprecision::abs(ep), boost::multiprecision::abs(em));

      auto counter = make_counter(model, X);
      const BigInt up_a = downward_dimension(*counter, a.scaled(1 + row.delta), X, unit);
      const BigInt up_b = downward_dimension(*counter, a_prime.scaled(1 + row.delta_prime), X, unit);
      const BigInt dn_b = downward_dimension(*counter, a_prime.scaled(1 - row.delta_prime), X, unit);
      const BigInt dn_a = downward_dimension(*counter, a.scaled(1 - row.delta), X, unit);
      row.sandwich_upper = up_a < up_b;
      row.sandwich_lower = dn_b < dn_a;
      row.ok = row.sandwich_upper && row.sandwich_lower;
      if (!row.ok) row.note = "sandwich inequality failed";
    } catch (const computation_error& e) {
      row.ok = false;
      row.note = e.what();
    }
    res.rows.push_back(std::move(row));
  }
  res.all_ok = !res.rows.empty();
  std::vector<std::pair<long, Rational>> steps;
  for (const auto& r : res.rows) {
    if (r.ok) steps.emplace_back(r.X, r.delta_prime);
    else res.all_ok = false;
  }
  if (!steps.empty()) {
    try {
      res.schedule = DeltaSchedule::table(std::move(steps), "delta-prime");
    } catch (const validation_error& e) {
      res.schedule.reset();
    }
  }
  return res;
}

// ---- verdicts ----

enum class Decision { possible, impossible, indeterminate };
enum class Basis { theorem1, theorem2, lemma4, finite_scale };

inline std::string to_string(Decision d) {
  switch (d) {
    case Decision::possible: return "possible";
    case Decision::impossible: return "impossible";
    case Decision::indeterminate: return "indeterminate";
  }
  return "?";
}

inline std::string to_string(Basis b) {
  switch (b) {
    case Basis::theorem1: return "theorem1";
    case Basis::theorem2: return "theorem2";
    case Basis::lemma4: return "lemma4";
    case Basis::finite_scale: return "finite-scale";
  }
  return "?";
}

struct ScaleEvidence {
  long X = 0;
  BigInt D_from, D_to;
  std::string note;
};

struct Verdict {
  Decision decision = Decision::indeterminate;
  Basis basis = Basis::theorem1;
  std::string from_label, to_label;
  double margin = 0.0;                                   // gap needed before a call is made
  std::vector<std::pair<std::string, double>> numbers;   // named scalar evidence
  std::vector<ScaleEvidence> scale_rows;
  std::vector<std::string> notes;
  std::optional<DeltaPrimeResult> delta_prime;
};

struct VerdictConfig {
  std::vector<long> scales;
  std::vector<DeltaSchedule> schedules;   // declared family for Delta
  double margin_floor = 1e-4;             // nats
  double tail_fraction = 0.5;
  long x0 = 0;                            // 0: use the smallest scale
  ShellConvention convention;
  Rational screen_bump = Rational(1, 64);
  double screen_slope = 1e-6;
};

namespace detail {

inline long effective_x0(const VerdictConfig& cfg) {
  return cfg.x0 > 0 ? cfg.x0 : cfg.scales.front();
}

}  // namespace detail

// Single-function criterion: compare downward-regularized entropy estimates;
// ties fall through to the explicit delta'-construction branch.
inline Verdict verdict_theorem1(const ModelSystem& model, const Macrostate& a,
                                const Macrostate& a_prime, const VerdictConfig& cfg) {
  if (cfg.scales.empty()) throw validation_error("verdict: no scales configured");
  Verdict v;
  v.basis = Basis::theorem1;
  v.from_label = a.label;
  v.to_label = a_prime.label;

  const auto screen_a = strict_increase_screen(model, a, cfg.scales, cfg.screen_bump, cfg.screen_slope);
  const auto screen_b =
      strict_increase_screen(model, a_prime, cfg.scales, cfg.screen_bump, cfg.screen_slope);
  v.notes.push_back("screening(from): " + screen_a.note);
  v.notes.push_back("screening(to): " + screen_b.note);
  if (!screen_a.passed || !screen_b.passed) {
    v.decision = Decision::indeterminate;
    v.notes.push_back("strict-increase screening failed; theorem hypotheses not validated");
    return v;
  }

  const auto seq_a = entropy_density_sequence(model, a, std::nullopt, cfg.scales, cfg.convention);
  const auto seq_b =
      entropy_density_sequence(model, a_prime, std::nullopt, cfg.scales, cfg.convention);
  const auto est_a = estimate_limit(seq_a, EstimateMethod::affine);
  const auto est_b = estimate_limit(seq_b, EstimateMethod::affine);
  for (std::size_t i = 0; i < seq_a.points.size(); ++i)
    v.scale_rows.push_back({seq_a.points[i].X, seq_a.points[i].D,
                            i < seq_b.points.size() ? seq_b.points[i].D : BigInt(0), "D_down"});

  v.margin = est_a.error_bar + est_b.error_bar + cfg.margin_floor;
  const double gap = est_b.value - est_a.value;
  v.numbers = {{"S_from", est_a.value}, {"S_from_err", est_a.error_bar},
               {"S_to", est_b.value},   {"S_to_err", est_b.error_bar},
               {"gap", gap}};
  if (gap > v.margin) {
    v.decision = Decision::possible;
    v.notes.push_back("entropy gap exceeds margin");
    return v;
  }
  if (-gap > v.margin) {
    v.decision = Decision::impossible;
    v.notes.push_back("reversed entropy gap exceeds margin");
    return v;
  }

  // equal-entropy branch: the delta' construction must verify at every tested
  // scale >= X0, for every declared schedule
  const long X0 = detail::effective_x0(cfg);
  if (cfg.schedules.empty()) {
    v.decision = Decision::indeterminate;
    v.notes.push_back("entropies within margin and no schedule declared for the equal-entropy branch");
    return v;
  }
  bool all_ok = true;
  for (const auto& sched : cfg.schedules) {
    auto dp = construct_delta_prime(model, a, a_prime, sched, cfg.scales);
    for (const auto& row : dp.rows)
      if (row.X >= X0 && !row.ok) all_ok = false;
    if (!v.delta_prime) v.delta_prime = std::move(dp);
    if (!all_ok) break;
  }
  if (all_ok) {
    v.decision = Decision::possible;
    v.notes.push_back("equal-entropy branch: delta' sandwich verified for all tested X >= " +
                      std::to_string(X0));
  } else {
    v.decision = Decision::indeterminate;
    v.notes.push_back("equal-entropy branch failed sandwich verification");
  }
  return v;
}

// Two-function criterion from the upper/lower regularizations.
inline Verdict verdict_theorem2(const ModelSystem& model, const Macrostate& a,
                                const Macrostate& a_prime, const VerdictConfig& cfg) {
  if (cfg.schedules.empty()) throw validation_error("verdict_theorem2: empty schedule family");
  Verdict v;
  v.basis = Basis::theorem2;
  v.from_label = a.label;
  v.to_label = a_prime.label;

  const auto ul_a =
      upper_lower_entropy(model, a, cfg.schedules, cfg.scales, cfg.tail_fraction, cfg.convention);
  const auto ul_b = upper_lower_entropy(model, a_prime, cfg.schedules, cfg.scales, cfg.tail_fraction,
                                        cfg.convention);
  v.numbers = {{"upper_from", ul_a.upper.value}, {"lower_from", ul_a.lower.value},
               {"upper_to", ul_b.upper.value},   {"lower_to", ul_b.lower.value}};

  const double m_pos = ul_a.upper.error_bar + ul_b.lower.error_bar + cfg.margin_floor;
  const double m_neg = ul_a.lower.error_bar + ul_b.upper.error_bar + cfg.margin_floor;
  v.margin = std::max(m_pos, m_neg);
  if (ul_b.lower.value - ul_a.upper.value > m_pos) {
    v.decision = Decision::possible;
    v.notes.push_back("upper(from) < lower(to) beyond margin");
  } else if (ul_a.lower.value - ul_b.upper.value > m_neg) {
    v.decision = Decision::impossible;
    v.notes.push_back("lower(from) > upper(to) beyond margin");
  } else {
    v.decision = Decision::indeterminate;
    v.notes.push_back("upper/lower estimates within margins");
  }
  return v;
}

// Schedule-level criterion: tail limsup/liminf proxies of the two declared
// sequences.
inline Verdict verdict_lemma4(const ModelSystem& model, const Macrostate& a,
                              const DeltaSchedule& sched_a, const Macrostate& a_prime,
                              const DeltaSchedule& sched_b, const VerdictConfig& cfg) {
  Verdict v;
  v.basis = Basis::lemma4;
  v.from_label = a.label;
  v.to_label = a_prime.label;

  auto proxies = [&](const Macrostate& m, const DeltaSchedule& s) {
    const auto seq = entropy_density_sequence(model, m, s, cfg.scales, cfg.convention);
    const auto tail = detail::tail_of(seq, cfg.tail_fraction);
    double mx = tail.points.front().s, mn = tail.points.front().s;
    for (const auto& p : tail.points) {
      mx = std::max(mx, p.s);
      mn = std::min(mn, p.s);
    }
    return std::array<double, 3>{mx, mn, 0.5 * (mx - mn)};
  };
  const auto pa = proxies(a, sched_a);
  const auto pb = proxies(a_prime, sched_b);
  v.numbers = {{"s_sup_from", pa[0]}, {"s_inf_from", pa[1]},
               {"s_sup_to", pb[0]},   {"s_inf_to", pb[1]}};
  v.margin = pa[2] + pb[2] + cfg.margin_floor;
  if (pb[1] - pa[0] > v.margin) {
    v.decision = Decision::possible;
    v.notes.push_back("s_sup(from) < s_inf(to) beyond margin");
  } else if (pa[1] - pb[0] > v.margin) {
    v.decision = Decision::impossible;
    v.notes.push_back("s_inf(from) > s_sup(to) beyond margin");
  } else {
    v.decision = Decision::indeterminate;
    v.notes.push_back("schedule-level proxies within margins");
  }
  return v;
}

// Per-scale flat-state comparison: possible iff the shell dimension never
// exceeds the target's at any tested scale >= X0. Finite-scale evidence can
// never establish impossibility.
inline Verdict verdict_finite_scale(const ModelSystem& model, const Macrostate& a,
                                    const DeltaSchedule& sched_a, const Macrostate& a_prime,
                                    const DeltaSchedule& sched_b, const VerdictConfig& cfg) {
  Verdict v;
  v.basis = Basis::finite_scale;
  v.from_label = a.label;
  v.to_label = a_prime.label;
  const long X0 = detail::effective_x0(cfg);
  bool all_le = true;
  long compared = 0;
  for (long X : cfg.scales) {
    if (X < X0) continue;
    auto counter = make_counter(model, X);
    const BigInt D = shell_dimension(*counter, a, sched_a.at(X), X, cfg.convention, model.value_unit());
    const BigInt Dp =
        shell_dimension(*counter, a_prime, sched_b.at(X), X, cfg.convention, model.value_unit());
    ScaleEvidence row{X, D, Dp, ""};
    if (D < 1 || Dp < 1) {
      row.note = "empty shell, skipped";
    } else {
      ++compared;
      if (!flat_convertible_at_scale(D, Dp)) {
        all_le = false;
        row.note = "D > D'";
      }
    }
    v.scale_rows.push_back(std::move(row));
  }
  if (compared > 0 && all_le) {
    v.decision = Decision::possible;
    v.notes.push_back("D <= D' at every tested scale >= " + std::to_string(X0));
  } else {
    v.decision = Decision::indeterminate;
    v.notes.push_back(compared == 0 ? "no nonempty scales to compare"
                                    : "dimension comparison failed at some scale");
  }
  return v;
}

}  // namespace adacc
