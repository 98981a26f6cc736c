#pragma once

#include <adacc/model.hpp>
#include <adacc/numeric.hpp>

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace adacc {

// Exact multiplicity table of the joint eigenvalues at one scale.
// Entries are sorted lexicographically; multiplicities are exact integers.
struct JointSpectrum {
  long scale = 0;
  std::vector<std::pair<std::vector<std::int64_t>, BigInt>> entries;
  BigInt total_dimension = 0;
  std::vector<Rational> value_unit;
};

namespace detail {

using Table = std::map<std::vector<std::int64_t>, BigInt>;

inline Table convolve(const Table& a, const Table& b, std::size_t cap) {
  Table out;
  std::vector<std::int64_t> key;
  for (const auto& [va, ma] : a) {
    for (const auto& [vb, mb] : b) {
      key.resize(va.size());
      for (std::size_t l = 0; l < va.size(); ++l) key[l] = va[l] + vb[l];
      out[key] += ma * mb;
      if (out.size() > cap)
        throw computation_error(
            "joint_spectrum: memory cap exceeded; use the threshold-counting operations "
            "(downward/shell dimensions), which stream the convolution");
    }
  }
  return out;
}

}  // namespace detail

// Multiplicity table at scale X, by binary-power convolution of the site table.
// Throws computation_error once the table would exceed `cap` distinct tuples.
inline JointSpectrum joint_spectrum(const ModelSystem& model, long X, std::size_t cap = 4'000'000) {
  if (X < 1) throw validation_error("joint_spectrum: scale must be >= 1");
  long sites = model.sites_at(X);

  // quick predicted-size check: the table is confined to the product of per-
  // observable value ranges
  double predicted = 1.0;
  for (int l = 0; l < model.num_observables(); ++l) {
    const double range =
        static_cast<double>(model.site_max(l) - model.site_min(l)) * static_cast<double>(sites) + 1.0;
    predicted *= range;
    if (predicted > 1e18) break;
  }
  // predicted is only an upper bound, but an enormous bound on a multi-
  // observable model is a reliable sign the table will not fit
  if (model.num_observables() >= 2 && predicted > 64.0 * static_cast<double>(cap))
    throw computation_error(
        "joint_spectrum: memory cap exceeded; use the threshold-counting operations "
        "(downward/shell dimensions), which stream the convolution");

  detail::Table site;
  for (const auto& lvl : model.site_table()) site[lvl.values] += lvl.weight;

  detail::Table acc;   // empty means "identity" (not yet seeded)
  detail::Table power = site;
  long n = sites;
  while (n > 0) {
    if (n & 1) acc = acc.empty() ? power : detail::convolve(acc, power, cap);
    n >>= 1;
    if (n > 0) power = detail::convolve(power, power, cap);
  }

  JointSpectrum sp;
  sp.scale = X;
  sp.value_unit = model.value_unit();
  sp.entries.assign(acc.begin(), acc.end());
  for (const auto& [v, m] : sp.entries) sp.total_dimension += m;
  return sp;
}

}  // namespace adacc
