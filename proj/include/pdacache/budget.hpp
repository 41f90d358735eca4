#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

namespace pdacache {

inline constexpr std::uint64_t kDefaultCellBudget = 10'000'000;
inline constexpr std::uint64_t kDefaultPermutationBudget = 5'000'000;

// Overrides: PDACACHE_CELL_BUDGET, PDACACHE_PERM_BUDGET.
inline std::uint64_t budget_from_env(const char* name, std::uint64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size() || v == 0) return fallback;
    return v;
  } catch (const std::exception&) {
    return fallback;
  }
}

inline std::uint64_t cell_budget() { return budget_from_env("PDACACHE_CELL_BUDGET", kDefaultCellBudget); }

inline std::uint64_t permutation_budget() {
  return budget_from_env("PDACACHE_PERM_BUDGET", kDefaultPermutationBudget);
}

namespace detail {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Saturates instead of overflowing.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace detail

}  // namespace pdacache
