#pragma once

#include <adacc/model.hpp>
#include <adacc/numeric.hpp>
#include <adacc/spectrum.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

namespace adacc {

// Exact counting of joint-eigenvalue multiplicity over threshold regions, in
// integer eigenvalue coordinates (value-unit conversion happens in the callers).
// count_downward: all lambda[l] <= thr[l].  count_box: lo[l] <= lambda[l] < hi[l].
class DimensionCounter {
 public:
  virtual ~DimensionCounter() = default;
  virtual BigInt count_downward(const std::vector<Rational>& thr) const = 0;
  virtual BigInt count_box(const std::vector<Rational>& lo,
                           const std::vector<Rational>& hi) const = 0;
  virtual const BigInt& total_dimension() const = 0;
  virtual int num_observables() const = 0;
  virtual std::int64_t value_min(int l) const = 0;
  virtual std::int64_t value_max(int l) const = 0;
};

namespace detail {

// Intersects { k : s*v0 + k*d  within bounds } over observables, as an integer
// interval [ka, kb] inside [0, s]. Returns false if empty.
struct KInterval {
  BigInt lo, hi;
  bool nonempty = true;

  explicit KInterval(long s) : lo(0), hi(s) {}

  void clamp_le(const Rational& bound, std::int64_t d, std::int64_t base, bool strict) {
    // k*d + base <= bound   (or < bound when strict)
    const Rational rhs = bound - Rational(base);
    if (d == 0) {
      if (strict ? !(Rational(0) < rhs) : !(Rational(0) <= rhs)) nonempty = false;
      return;
    }
    const Rational q = rhs / Rational(d);
    if (d > 0) {
      const BigInt b = strict ? rfloor_strict(q) : rfloor(q);
      if (b < hi) hi = b;
    } else {
      const BigInt b = strict ? rceil_strict(q) : rceil(q);
      if (b > lo) lo = b;
    }
    if (lo > hi) nonempty = false;
  }

  void clamp_ge(const Rational& bound, std::int64_t d, std::int64_t base) {
    // k*d + base >= bound
    const Rational rhs = bound - Rational(base);
    if (d == 0) {
      if (!(Rational(0) >= rhs)) nonempty = false;
      return;
    }
    const Rational q = rhs / Rational(d);
    if (d > 0) {
      const BigInt b = rceil(q);
      if (b > lo) lo = b;
    } else {
      const BigInt b = rfloor(q);
      if (b < hi) hi = b;
    }
    if (lo > hi) nonempty = false;
  }
};

// Tracks W = sum_{j<=m} C(n,j) w1^j w0^(n-j) and the edge term
// E = C(n,m) w1^m w0^(n-m) under unit moves of m and decrements of n.
// All updates are exact integer identities:
//   W(n-1, m) = (W(n, m) + w1*E(n-1, m)) / (w0 + w1)
//   E(n-1, m) = E(n, m) * (n-m) / (n*w0)
class WeightedBinomialPrefix {
 public:
  WeightedBinomialPrefix(long n, const BigInt& w0, const BigInt& w1)
      : n_(n), m_(n), w0_(w0), w1_(w1), wsum_(w0 + w1) {
    W_ = boost::multiprecision::pow(wsum_, static_cast<unsigned>(n));
    E_ = boost::multiprecision::pow(w1_, static_cast<unsigned>(n));
  }

  long n() const { return n_; }
  long m() const { return m_; }
  const BigInt& sum() const { return W_; }

  void move_m(long target) {
    if (target > n_) target = n_;
    if (target < -1) target = -1;
    while (m_ > target) {
      W_ -= E_;
      if (m_ >= 1) {
        E_ = E_ * m_ * w0_ / ((n_ - m_ + 1) * w1_);
      } else {
        E_ = 0;
      }
      --m_;
    }
    while (m_ < target) {
      ++m_;
      if (m_ == 0) {
        E_ = boost::multiprecision::pow(w0_, static_cast<unsigned>(n_));
      } else {
        E_ = E_ * (n_ - m_ + 1) * w1_ / (m_ * w0_);
      }
      W_ += E_;
    }
  }

  void dec_n() {
    if (m_ >= n_) {
      W_ /= wsum_;
      E_ /= w1_;
      --n_;
      m_ = n_;
      return;
    }
    --n_;
    if (m_ < 0) return;   // W = 0, E = 0 stay
    E_ = E_ * (n_ - m_ + 1) / ((n_ + 1) * w0_);
    W_ = (W_ + w1_ * E_) / wsum_;
  }

 private:
  long n_, m_;
  BigInt w0_, w1_, wsum_;
  BigInt W_, E_;
};

inline std::vector<SiteLevel> distinct_levels(const ModelSystem& model) {
  std::map<std::vector<std::int64_t>, BigInt> agg;
  for (const auto& lvl : model.site_table()) agg[lvl.values] += lvl.weight;
  std::vector<SiteLevel> out;
  for (const auto& [v, w] : agg) out.push_back({v, w});
  return out;
}

}  // namespace detail

// Scans a materialized spectrum; exact for any model that fits under the cap.
class TableCounter : public DimensionCounter {
 public:
  explicit TableCounter(JointSpectrum spectrum) : sp_(std::move(spectrum)) {
    const int L1 = sp_.entries.empty() ? 0 : static_cast<int>(sp_.entries.front().first.size());
    mins_.assign(L1, 0);
    maxs_.assign(L1, 0);
    for (int l = 0; l < L1; ++l) {
      mins_[l] = maxs_[l] = sp_.entries.front().first[l];
      for (const auto& [v, m] : sp_.entries) {
        mins_[l] = std::min(mins_[l], v[l]);
        maxs_[l] = std::max(maxs_[l], v[l]);
      }
    }
  }

  BigInt count_downward(const std::vector<Rational>& thr) const override {
    BigInt c = 0;
    for (const auto& [v, m] : sp_.entries) {
      bool in = true;
      for (std::size_t l = 0; l < v.size() && in; ++l)
        if (!(Rational(v[l]) <= thr[l])) in = false;
      if (in) c += m;
    }
    return c;
  }

  BigInt count_box(const std::vector<Rational>& lo, const std::vector<Rational>& hi) const override {
    BigInt c = 0;
    for (const auto& [v, m] : sp_.entries) {
      bool in = true;
      for (std::size_t l = 0; l < v.size() && in; ++l)
        if (!(Rational(v[l]) >= lo[l] && Rational(v[l]) < hi[l])) in = false;
      if (in) c += m;
    }
    return c;
  }

  const BigInt& total_dimension() const override { return sp_.total_dimension; }
  int num_observables() const override {
    return sp_.entries.empty() ? 0 : static_cast<int>(sp_.entries.front().first.size());
  }
  std::int64_t value_min(int l) const override { return mins_[l]; }
  std::int64_t value_max(int l) const override { return maxs_[l]; }
  const JointSpectrum& spectrum() const { return sp_; }

 private:
  JointSpectrum sp_;
  std::vector<std::int64_t> mins_, maxs_;
};

// Models with exactly two distinct site tuples: the composition is the count k
// of sites in level 1, so every region count is a weighted binomial prefix-sum
// difference. Prefix table is built once per scale; queries are O(L).
class TwoTupleCounter : public DimensionCounter {
 public:
  TwoTupleCounter(const ModelSystem& model, long X) : sites_(model.sites_at(X)) {
    auto lv = detail::distinct_levels(model);
    v0_ = lv[0].values;
    v1_ = lv[1].values;
    w0_ = lv[0].weight;
    w1_ = lv[1].weight;
    L1_ = static_cast<int>(v0_.size());
    prefix_.resize(sites_ + 1);
    BigInt term = boost::multiprecision::pow(w0_, static_cast<unsigned>(sites_));
    prefix_[0] = term;
    for (long j = 0; j < sites_; ++j) {
      term = term * (sites_ - j) * w1_ / ((j + 1) * w0_);
      prefix_[j + 1] = prefix_[j] + term;
    }
  }

  BigInt count_downward(const std::vector<Rational>& thr) const override {
    detail::KInterval iv(sites_);
    for (int l = 0; l < L1_; ++l) {
      iv.clamp_le(thr[l], v1_[l] - v0_[l], v0_[l] * sites_, /*strict=*/false);
      if (!iv.nonempty) return 0;
    }
    return range_sum(iv);
  }

  BigInt count_box(const std::vector<Rational>& lo, const std::vector<Rational>& hi) const override {
    detail::KInterval iv(sites_);
    for (int l = 0; l < L1_; ++l) {
      const std::int64_t d = v1_[l] - v0_[l];
      const std::int64_t base = v0_[l] * sites_;
      iv.clamp_ge(lo[l], d, base);
      iv.clamp_le(hi[l], d, base, /*strict=*/true);
      if (!iv.nonempty) return 0;
    }
    return range_sum(iv);
  }

  const BigInt& total_dimension() const override { return prefix_.back(); }
  int num_observables() const override { return L1_; }
  std::int64_t value_min(int l) const override { return std::min(v0_[l], v1_[l]) * sites_; }
  std::int64_t value_max(int l) const override { return std::max(v0_[l], v1_[l]) * sites_; }

 private:
  BigInt range_sum(const detail::KInterval& iv) const {
    long ka = iv.lo < 0 ? 0 : iv.lo.convert_to<long>();
    long kb = iv.hi > sites_ ? sites_ : iv.hi.convert_to<long>();
    if (ka > kb) return 0;
    BigInt s = prefix_[kb];
    if (ka > 0) s -= prefix_[ka - 1];
    return s;
  }

  long sites_;
  int L1_;
  std::vector<std::int64_t> v0_, v1_;
  BigInt w0_, w1_;
  std::vector<BigInt> prefix_;
};

// Three distinct site tuples: sweep the count k2 of sites in level 2 and keep
// the inner sum over k1 as a tracked weighted binomial prefix. O(sites) exact
// big-integer work per query, no table materialization.
class SimplexCounter : public DimensionCounter {
 public:
  SimplexCounter(const ModelSystem& model, long X) : sites_(model.sites_at(X)) {
    auto lv = detail::distinct_levels(model);
    v0_ = lv[0].values;
    v1_ = lv[1].values;
    v2_ = lv[2].values;
    w0_ = lv[0].weight;
    w1_ = lv[1].weight;
    w2_ = lv[2].weight;
    L1_ = static_cast<int>(v0_.size());
    total_ = boost::multiprecision::pow(w0_ + w1_ + w2_, static_cast<unsigned>(sites_));
    for (int l = 0; l < L1_; ++l) {
      std::int64_t lo = std::min({v0_[l], v1_[l], v2_[l]});
      std::int64_t hi = std::max({v0_[l], v1_[l], v2_[l]});
      mins_.push_back(lo * sites_);
      maxs_.push_back(hi * sites_);
    }
  }

  BigInt count_downward(const std::vector<Rational>& thr) const override {
    return sweep(nullptr, &thr);
  }

  BigInt count_box(const std::vector<Rational>& lo, const std::vector<Rational>& hi) const override {
    return sweep(&lo, &hi);
  }

  const BigInt& total_dimension() const override { return total_; }
  int num_observables() const override { return L1_; }
  std::int64_t value_min(int l) const override { return mins_[l]; }
  std::int64_t value_max(int l) const override { return maxs_[l]; }

 private:
  // lo == nullptr: downward count with closed upper thresholds *hi.
  // lo != nullptr: half-open box [lo, hi).
  BigInt sweep(const std::vector<Rational>* lo, const std::vector<Rational>* hi) const {
    BigInt tot = 0;
    BigInt outer = 1;  // C(sites, k2) * w2^k2
    detail::WeightedBinomialPrefix upper(sites_, w0_, w1_);
    detail::WeightedBinomialPrefix lower(sites_, w0_, w1_);  // tracks ka-1
    const bool strict_hi = lo != nullptr;
    for (long k2 = 0; k2 <= sites_; ++k2) {
      const long n = sites_ - k2;
      detail::KInterval iv(n);
      for (int l = 0; l < L1_ && iv.nonempty; ++l) {
        const std::int64_t d1 = v1_[l] - v0_[l];
        const std::int64_t base = v0_[l] * sites_ + (v2_[l] - v0_[l]) * k2;
        if (lo != nullptr) iv.clamp_ge((*lo)[l], d1, base);
        iv.clamp_le((*hi)[l], d1, base, strict_hi);
      }
      if (iv.nonempty) {
        long ka = iv.lo < 0 ? 0 : iv.lo.convert_to<long>();
        long kb = iv.hi > n ? n : iv.hi.convert_to<long>();
        if (ka <= kb) {
          upper.move_m(kb);
          lower.move_m(ka - 1);
          BigInt inner = upper.sum() - lower.sum();
          tot += outer * inner;
        }
      }
      if (k2 < sites_) {
        outer = outer * (sites_ - k2) * w2_ / (k2 + 1);
        upper.dec_n();
        lower.dec_n();
      }
    }
    return tot;
  }

  long sites_;
  int L1_;
  std::vector<std::int64_t> v0_, v1_, v2_;
  BigInt w0_, w1_, w2_, total_;
  std::vector<std::int64_t> mins_, maxs_;
};

// Picks the cheapest exact counter the site-table structure admits.
inline std::unique_ptr<DimensionCounter> make_counter(const ModelSystem& model, long X,
                                                      std::size_t table_cap = 4'000'000) {
  if (X < 1) throw validation_error("make_counter: scale must be >= 1");
  const auto lv = detail::distinct_levels(model);
  if (lv.size() == 2) return std::make_unique<TwoTupleCounter>(model, X);
  if (lv.size() == 3) return std::make_unique<SimplexCounter>(model, X);
  return std::make_unique<TableCounter>(joint_spectrum(model, X, table_cap));
}

}  // namespace adacc
