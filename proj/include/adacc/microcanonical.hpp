#pragma once

#include <adacc/counting.hpp>
#include <adacc/model.hpp>
#include <adacc/numeric.hpp>
#include <adacc/spectrum.hpp>

#include <optional>
#include <string>
#include <vector>

namespace adacc {

// Densities of the L+1 extensive observables, energy density first.
// Stored as exact rationals so threshold comparisons never see rounding.
struct Macrostate {
  std::vector<Rational> densities;
  std::string label;

  static Macrostate from_strings(const std::vector<std::string>& parts, std::string label = "") {
    Macrostate m;
    m.label = std::move(label);
    for (const auto& p : parts) m.densities.push_back(rational_from_string(p));
    return m;
  }
  static Macrostate from_doubles(const std::vector<double>& vals, std::string label = "") {
    Macrostate m;
    m.label = std::move(label);
    for (double v : vals) m.densities.push_back(rational_from_double(v));
    return m;
  }
  int size() const { return static_cast<int>(densities.size()); }

  Macrostate scaled(const Rational& factor) const {
    Macrostate m = *this;
    for (auto& d : m.densities) d *= factor;
    return m;
  }
};

enum class ShellMode { multiplicative, additive };

// Shell windows are half-open [lo, hi); downward sets are closed (lambda <= t).
struct ShellConvention {
  ShellMode mode = ShellMode::multiplicative;
};

inline std::string to_string(ShellMode m) {
  return m == ShellMode::multiplicative ? "multiplicative" : "additive";
}

// Set when a threshold lands exactly on an integer eigenvalue inside the value
// range; at such points the closed-vs-half-open conventions can differ by the
// boundary multiplicity. Conservative: integral thresholds in range are flagged
// even if that particular value is absent from a sparse spectrum.
struct BoundaryFlag {
  bool hit = false;
};

// Maximally mixed state on a shell: D eigenvalues equal to 1/D.
struct FlatState {
  BigInt dimension;
  BigInt ambient_dimension;
  struct Support {
    Macrostate macrostate;
    Rational delta;
    long scale = 0;
    ShellConvention convention;
  } support;
};

namespace detail {

inline void check_arity(const DimensionCounter& c, const Macrostate& a) {
  if (a.size() != c.num_observables())
    throw validation_error("macrostate arity " + std::to_string(a.size()) +
                           " does not match model observables " +
                           std::to_string(c.num_observables()));
}

// thresholds in integer eigenvalue space: X * a_l / unit_l
inline std::vector<Rational> downward_thresholds(const Macrostate& a, long X,
                                                 const std::vector<Rational>& unit) {
  std::vector<Rational> thr(a.densities.size());
  for (std::size_t l = 0; l < thr.size(); ++l) thr[l] = Rational(X) * a.densities[l] / unit[l];
  return thr;
}

inline void flag_boundary(const DimensionCounter& c, const std::vector<Rational>& thr,
                          BoundaryFlag* flag) {
  if (flag == nullptr) return;
  for (int l = 0; l < c.num_observables(); ++l) {
    if (is_integer(thr[l]) && thr[l] >= Rational(c.value_min(l)) &&
        thr[l] <= Rational(c.value_max(l))) {
      flag->hit = true;
      return;
    }
  }
}

}  // namespace detail

// ---- counter-based core operations ----

inline BigInt downward_dimension(const DimensionCounter& counter, const Macrostate& a, long X,
                                 const std::vector<Rational>& value_unit,
                                 BoundaryFlag* flag = nullptr) {
  detail::check_arity(counter, a);
  const auto thr = detail::downward_thresholds(a, X, value_unit);
  detail::flag_boundary(counter, thr, flag);
  return counter.count_downward(thr);
}

inline BigInt shell_dimension(const DimensionCounter& counter, const Macrostate& a,
                              const Rational& delta, long X, ShellConvention conv,
                              const std::vector<Rational>& value_unit,
                              BoundaryFlag* flag = nullptr) {
  detail::check_arity(counter, a);
  if (!(delta > 0)) throw validation_error("shell_dimension: delta must be positive");
  std::vector<Rational> lo(a.densities.size()), hi(a.densities.size());
  for (std::size_t l = 0; l < lo.size(); ++l) {
    if (conv.mode == ShellMode::multiplicative) {
      lo[l] = Rational(X) * a.densities[l] * (Rational(1) - delta) / value_unit[l];
      hi[l] = Rational(X) * a.densities[l] * (Rational(1) + delta) / value_unit[l];
    } else {
      lo[l] = Rational(X) * (a.densities[l] - delta) / value_unit[l];
      hi[l] = Rational(X) * (a.densities[l] + delta) / value_unit[l];
    }
  }
  detail::flag_boundary(counter, lo, flag);
  detail::flag_boundary(counter, hi, flag);
  return counter.count_box(lo, hi);
}

// ---- spectrum-based interface ----

inline BigInt downward_dimension(const JointSpectrum& spectrum, const Macrostate& a, long X,
                                 BoundaryFlag* flag = nullptr) {
  if (spectrum.scale != X)
    throw validation_error("downward_dimension: spectrum scale " + std::to_string(spectrum.scale) +
                           " does not match X=" + std::to_string(X));
  TableCounter counter(spectrum);
  return downward_dimension(counter, a, X, spectrum.value_unit, flag);
}

inline BigInt shell_dimension(const JointSpectrum& spectrum, const Macrostate& a,
                              const Rational& delta, long X, ShellConvention conv = {},
                              BoundaryFlag* flag = nullptr) {
  if (spectrum.scale != X)
    throw validation_error("shell_dimension: spectrum scale " + std::to_string(spectrum.scale) +
                           " does not match X=" + std::to_string(X));
  TableCounter counter(spectrum);
  return shell_dimension(counter, a, delta, X, conv, spectrum.value_unit, flag);
}

// S_B = ln D, from the exact integer count.
inline double boltzmann_entropy(const BigInt& D) {
  if (D < 1) throw computation_error("boltzmann_entropy: empty shell");
  return log_big(D);
}

inline FlatState microcanonical_state(const DimensionCounter& counter, const Macrostate& a,
                                      const Rational& delta, long X, ShellConvention conv,
                                      const std::vector<Rational>& value_unit) {
  BigInt D = shell_dimension(counter, a, delta, X, conv, value_unit);
  if (D < 1) throw computation_error("microcanonical_state: empty shell");
  FlatState st;
  st.dimension = D;
  st.ambient_dimension = counter.total_dimension();
  st.support = {a, delta, X, conv};
  return st;
}

inline FlatState microcanonical_state(const JointSpectrum& spectrum, const Macrostate& a,
                                      const Rational& delta, long X, ShellConvention conv = {}) {
  TableCounter counter(spectrum);
  return microcanonical_state(counter, a, delta, X, conv, spectrum.value_unit);
}

}  // namespace adacc
