#pragma once

#include <compare>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "pdacache/constructions.hpp"
#include "pdacache/pda.hpp"
#include "pdacache/profile.hpp"

namespace pdacache {

// Delivery load as (number of multicast messages) / F. Kept unreduced so the
// message count stays visible; comparisons are by value.
struct LoadValue {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  LoadValue reduced() const {
    const std::uint64_t g = std::gcd(numerator, denominator);
    return g == 0 ? *this : LoadValue{numerator / g, denominator / g};
  }

  double to_double() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }

  // Fixed-point rendering, round-half-even.
  std::string to_decimal(int places = 3) const {
    unsigned __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const unsigned __int128 scaled = static_cast<unsigned __int128>(numerator) * scale;
    unsigned __int128 q = scaled / denominator;
    const unsigned __int128 rem = scaled % denominator;
    const unsigned __int128 twice = rem * 2;
    if (twice > denominator || (twice == denominator && (q % 2) == 1)) ++q;
    const auto whole = static_cast<std::uint64_t>(q / scale);
    auto frac = std::to_string(static_cast<std::uint64_t>(q % scale));
    if (places == 0) return std::to_string(whole);
    frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
    return std::to_string(whole) + "." + frac;
  }

  std::string to_fraction() const { return std::to_string(numerator) + "/" + std::to_string(denominator); }

  // True when numerator and denominator both match, not just the value.
  bool identical(const LoadValue& o) const { return numerator == o.numerator && denominator == o.denominator; }

  friend bool operator==(const LoadValue& a, const LoadValue& b) {
    return static_cast<unsigned __int128>(a.numerator) * b.denominator ==
           static_cast<unsigned __int128>(b.numerator) * a.denominator;
  }
  friend std::strong_ordering operator<=>(const LoadValue& a, const LoadValue& b) {
    const auto l = static_cast<unsigned __int128>(a.numerator) * b.denominator;
    const auto r = static_cast<unsigned __int128>(b.numerator) * a.denominator;
    return l <=> r;
  }
};

inline std::ostream& operator<<(std::ostream& os, const LoadValue& v) { return os << v.to_fraction(); }

// tau[s]: 1-based position of the first column containing symbol s.
struct TauMap {
  std::vector<std::size_t> tau;
};

inline TauMap tau_values(const Pda& pda) {
  TauMap out{std::vector<std::size_t>(pda.symbol_count(), 0)};
  for (std::size_t c = 0; c < pda.columns(); ++c) {
    for (std::size_t r = 0; r < pda.rows(); ++r) {
      const Cell cell = pda.at(r, c);
      if (!cell.is_star() && out.tau[cell.symbol()] == 0) out.tau[cell.symbol()] = c + 1;
    }
  }
  return out;
}

// sum_s L_{tau_s} / F. The PDA columns must already be in sorted-profile order.
inline LoadValue load_from_pda(const Pda& pda, std::span<const std::uint32_t> sorted_loads) {
  if (sorted_loads.size() != pda.columns())
    throw DimensionMismatch("profile has " + std::to_string(sorted_loads.size()) + " caches, PDA has " +
                            std::to_string(pda.columns()) + " columns");
  LoadValue v{0, pda.rows()};
  for (std::size_t t : tau_values(pda).tau) v.numerator += sorted_loads[t - 1];
  return v;
}

inline LoadValue load_from_pda(const Pda& pda, const Profile& profile) {
  return load_from_pda(pda, std::span<const std::uint32_t>(profile.loads()));
}

// sum_s max{i : (s, i) in G} / F.
inline LoadValue load_from_gpda(const GeneralizedPda& g) {
  std::vector<std::uint32_t> top(g.symbol_count(), 0);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.columns(); ++c) {
      const GCell cell = g.at(r, c);
      if (!cell.is_star()) top[cell.symbol()] = std::max(top[cell.symbol()], cell.replica());
    }
  }
  return {std::accumulate(top.begin(), top.end(), std::uint64_t{0}), g.rows()};
}

namespace detail {

inline void check_const_b_profile(const ConstBParams& p, const Profile& profile) {
  if (p.q < 2 || p.m < 1) throw std::invalid_argument("Construction B requires q >= 2 and m >= 1");
  if (profile.size() != p.columns())
    throw DimensionMismatch("Construction B with q=" + std::to_string(p.q) + ", m=" + std::to_string(p.m) +
                            " needs a profile of length " + std::to_string(p.columns()));
}

}  // namespace detail

// L_1/q + L_2/q^2 + ... + L_m/q^m + L_{m+2}/((q-1)q^m), over F = (q-1)q^m.
inline LoadValue load_const_b_ordered(std::size_t q, std::size_t m, const Profile& profile) {
  const ConstBParams p{q, m};
  detail::check_const_b_profile(p, profile);
  LoadValue v{0, p.rows()};
  for (std::size_t i = 1; i <= m; ++i) v.numerator += std::uint64_t{profile[i - 1]} * (q - 1) * p.power(m - i);
  v.numerator += profile[m + 1];
  return v;
}

// L_1/q + L_2/(q(q-1)), over F = (q-1)q^m.
inline LoadValue load_const_b_unordered(std::size_t q, std::size_t m, const Profile& profile) {
  const ConstBParams p{q, m};
  detail::check_const_b_profile(p, profile);
  return {std::uint64_t{profile[0]} * (q - 1) * p.power(m - 1) + std::uint64_t{profile[1]} * p.power(m - 1),
          p.rows()};
}

// Shared-cache load of the MN PDA; invariant under column order.
inline LoadValue load_mn_baseline(std::size_t num_caches, std::size_t t, const Profile& profile,
                                  std::uint64_t budget = cell_budget()) {
  if (profile.size() != num_caches) throw DimensionMismatch("profile length differs from number of caches");
  return load_from_pda(construct_mn(num_caches, t, budget), profile);
}

}  // namespace pdacache
