#pragma once

#include <span>
#include <vector>

#include "pdacache/pda.hpp"
#include "pdacache/profile.hpp"

namespace pdacache {

// Expands a cache-level PDA into a user-level generalized PDA: cache lambda
// contributes loads[lambda] copies of its column, the i-th copy (1-based)
// turning each symbol s into (s, i). Users are numbered cache-major.
inline GeneralizedPda build_gpda(const Pda& pda, std::span<const std::uint32_t> loads) {
  if (loads.size() != pda.columns())
    throw DimensionMismatch("profile has " + std::to_string(loads.size()) + " caches, PDA has " +
                            std::to_string(pda.columns()) + " columns");
  std::uint64_t users = 0;
  for (auto l : loads) users += l;
  if (users == 0) throw std::invalid_argument("profile has no users");

  Grid<GCell> grid(pda.rows(), users);
  std::vector<std::size_t> user_to_cache;
  user_to_cache.reserve(users);
  std::size_t k = 0;
  for (std::size_t cache = 0; cache < pda.columns(); ++cache) {
    for (std::uint32_t i = 0; i < loads[cache]; ++i, ++k) {
      for (std::size_t j = 0; j < pda.rows(); ++j) {
        const Cell cell = pda.at(j, cache);
        if (!cell.is_star()) grid(j, k) = GCell::pair(cell.symbol(), i + 1);
      }
      user_to_cache.push_back(cache);
    }
  }
  auto checked = validate_gpda(std::move(grid), std::move(user_to_cache));
  if (!checked.ok()) throw std::logic_error("expansion produced an invalid GPDA:\n" + checked.report.to_string());
  return std::move(checked).take();
}

// Uses the sorted loads, so pda columns must be in sorted-profile order.
inline GeneralizedPda build_gpda(const Pda& pda, const Profile& profile) {
  return build_gpda(pda, std::span<const std::uint32_t>(profile.loads()));
}

// Collapses (s, 1) back to s. Every pair must have replica index 1.
inline Pda reduce_to_pda(const GeneralizedPda& g) {
  Grid<Cell> grid(g.rows(), g.columns());
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.columns(); ++c) {
      const GCell cell = g.at(r, c);
      if (cell.is_star()) continue;
      if (cell.replica() != 1)
        throw std::invalid_argument("cannot reduce: pair (" + std::to_string(cell.symbol() + 1) + "," +
                                    std::to_string(cell.replica()) + ") has replica index above 1");
      grid(r, c) = Cell::symbol(cell.symbol());
    }
  }
  return Pda::from_grid(std::move(grid));
}

}  // namespace pdacache
