#pragma once

#include <adacc/numeric.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace adacc {

// One per-site alternative: a joint eigenvalue tuple of the L+1 commuting
// observables (index 0 is energy) plus a degeneracy weight.
struct SiteLevel {
  std::vector<std::int64_t> values;
  BigInt weight = 1;
};

// A scale-indexed family of independent identical sites. The joint spectrum at
// scale X is the sites_at(X)-fold convolution of the site table.
class ModelSystem {
 public:
  ModelSystem(std::string name, std::vector<SiteLevel> site_table,
              std::vector<Rational> value_unit = {}, long sites_per_scale = 1)
      : name_(std::move(name)),
        site_table_(std::move(site_table)),
        value_unit_(std::move(value_unit)),
        sites_per_scale_(sites_per_scale) {
    if (site_table_.empty()) throw validation_error("empty site table");
    num_observables_ = static_cast<int>(site_table_.front().values.size());
    if (num_observables_ < 1) throw validation_error("site tuples need at least one observable");
    for (const auto& lvl : site_table_) {
      if (static_cast<int>(lvl.values.size()) != num_observables_)
        throw validation_error("tuple arity mismatch in site table for model '" + name_ + "'");
      if (lvl.weight <= 0) throw validation_error("site multiplicities must be positive");
    }
    if (value_unit_.empty()) value_unit_.assign(num_observables_, Rational(1));
    if (static_cast<int>(value_unit_.size()) != num_observables_)
      throw validation_error("value_unit arity mismatch");
    for (const auto& u : value_unit_)
      if (u <= 0) throw validation_error("value units must be positive");
    if (sites_per_scale_ < 1) throw validation_error("sites_per_scale multiplier must be >= 1");

    std::set<std::vector<std::int64_t>> distinct;
    for (const auto& lvl : site_table_) distinct.insert(lvl.values);
    if (distinct.size() < 2)
      throw validation_error("model '" + name_ + "' needs at least two distinct per-site tuples");
  }

  const std::string& name() const { return name_; }
  int num_observables() const { return num_observables_; }          // L+1
  const std::vector<SiteLevel>& site_table() const { return site_table_; }
  const std::vector<Rational>& value_unit() const { return value_unit_; }
  long sites_at(long scale) const { return sites_per_scale_ * scale; }
  long sites_per_scale() const { return sites_per_scale_; }

  // min/max per-site eigenvalue of observable l
  std::int64_t site_min(int l) const {
    std::int64_t m = site_table_.front().values[l];
    for (const auto& lvl : site_table_) m = std::min(m, lvl.values[l]);
    return m;
  }
  std::int64_t site_max(int l) const {
    std::int64_t m = site_table_.front().values[l];
    for (const auto& lvl : site_table_) m = std::max(m, lvl.values[l]);
    return m;
  }

  BigInt alternatives_per_site() const {
    BigInt s = 0;
    for (const auto& lvl : site_table_) s += lvl.weight;
    return s;
  }

 private:
  std::string name_;
  std::vector<SiteLevel> site_table_;
  std::vector<Rational> value_unit_;
  long sites_per_scale_;
  int num_observables_;
};

// Declarative model description; `family` selects a built-in or "raw".
struct ModelSpec {
  std::string family;
  std::map<std::string, std::string> params;     // family parameters, e.g. e2, quanta
  std::vector<SiteLevel> raw_site_table;         // used when family == "raw"
  std::vector<Rational> value_unit;
  long sites_per_scale = 1;
};

// Built-in families:
//   paramagnet      — two-level sites, tuples {(0), (1)}, L=0
//   lattice-gas     — tuples {(0,0), (1,1), (e2,1)}, L=1, e2 configurable (default 2)
//   oscillator      — bounded-quanta chain, tuples {(0), (1), ..., (quanta)}, L=0
//   raw             — site table given explicitly
inline ModelSystem build_model(const ModelSpec& spec) {
  auto get_int = [&](const std::string& key, std::int64_t dflt) {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) return dflt;
    try {
      return static_cast<std::int64_t>(std::stoll(it->second));
    } catch (const std::exception&) {
      throw validation_error("parameter '" + key + "' must be an integer, got '" + it->second + "'");
    }
  };

  if (spec.family == "paramagnet") {
    return ModelSystem("paramagnet", {{{0}, 1}, {{1}, 1}}, spec.value_unit, spec.sites_per_scale);
  }
  if (spec.family == "lattice-gas") {
    const std::int64_t e2 = get_int("e2", 2);
    if (e2 == 1) throw validation_error("lattice-gas requires e2 != 1 (tuples must be distinct)");
    return ModelSystem("lattice-gas", {{{0, 0}, 1}, {{1, 1}, 1}, {{e2, 1}, 1}}, spec.value_unit,
                       spec.sites_per_scale);
  }
  if (spec.family == "oscillator") {
    const std::int64_t q = get_int("quanta", 3);
    if (q < 1) throw validation_error("oscillator requires quanta >= 1");
    std::vector<SiteLevel> table;
    for (std::int64_t k = 0; k <= q; ++k) table.push_back({{k}, 1});
    return ModelSystem("oscillator", std::move(table), spec.value_unit, spec.sites_per_scale);
  }
  if (spec.family == "raw") {
    if (spec.raw_site_table.empty()) throw validation_error("empty site table");
    return ModelSystem("raw", spec.raw_site_table, spec.value_unit, spec.sites_per_scale);
  }
  throw validation_error("unknown model family '" + spec.family + "'");
}

}  // namespace adacc
