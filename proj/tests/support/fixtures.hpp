#pragma once

// Arrays from the worked examples, independent brute-force oracles, and a
// random generator of valid PDAs for property tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdacache/pdacache.hpp"

namespace fixtures {

using pdacache::Cell;
using pdacache::GCell;
using pdacache::Grid;
using pdacache::Pda;

// 1-based symbols, 0 for a star.
inline Grid<Cell> grid_of(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<Cell>> out;
  for (const auto& r : rows) {
    auto& o = out.emplace_back();
    for (int v : r) o.push_back(v == 0 ? Cell::star() : Cell::symbol(static_cast<pdacache::SymbolId>(v - 1)));
  }
  return Grid<Cell>::from_rows(out);
}

// The (6,3,1,6) motivating array and its better arrangement.
inline Grid<Cell> motivating_grid() {
  return grid_of({{0, 3, 5, 0, 1, 2}, {1, 0, 6, 3, 0, 4}, {2, 4, 0, 5, 6, 0}});
}
inline Grid<Cell> motivating_grid_reordered() {
  return grid_of({{0, 1, 2, 3, 5, 0}, {1, 0, 4, 0, 6, 3}, {2, 6, 0, 4, 0, 5}});
}
inline Pda motivating_pda() { return Pda::from_grid(motivating_grid()); }
inline Pda motivating_pda_reordered() { return Pda::from_grid(motivating_grid_reordered()); }
inline const std::vector<std::int64_t> kMotivatingProfile{5, 4, 3, 2, 2, 1};
inline const std::vector<std::int64_t> kNineCacheProfile{30, 25, 20, 10, 8, 5, 5, 4, 3};

// "s,i" tokens or "*", one string per row.
inline Grid<GCell> ggrid_of(const std::vector<std::string>& rows) {
  std::vector<std::vector<GCell>> out;
  for (const auto& line : rows) {
    auto& o = out.emplace_back();
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
      if (tok == "*") {
        o.push_back(GCell::star());
      } else {
        const auto comma = tok.find(',');
        o.push_back(GCell::pair(static_cast<pdacache::SymbolId>(std::stoi(tok.substr(0, comma)) - 1),
                                static_cast<std::uint32_t>(std::stoi(tok.substr(comma + 1)))));
      }
    }
  }
  return Grid<GCell>::from_rows(out);
}

// Users 1..17 on caches (5,4,3,2,2,1).
inline std::vector<std::size_t> motivating_user_to_cache() {
  return {0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 5};
}

inline Grid<GCell> gpda_g() {
  return ggrid_of({
      "*   *   *   *   *   3,1 3,2 3,3 3,4 5,1 5,2 5,3 *   *   1,1 1,2 2,1",
      "1,1 1,2 1,3 1,4 1,5 *   *   *   *   6,1 6,2 6,3 3,1 3,2 *   *   4,1",
      "2,1 2,2 2,3 2,4 2,5 4,1 4,2 4,3 4,4 *   *   *   5,1 5,2 6,1 6,2 *",
  });
}

inline Grid<GCell> gpda_g_prime() {
  return ggrid_of({
      "*   *   *   *   *   1,1 1,2 1,3 1,4 2,1 2,2 2,3 3,1 3,2 5,1 5,2 *",
      "1,1 1,2 1,3 1,4 1,5 *   *   *   *   4,1 4,2 4,3 *   *   6,1 6,2 3,1",
      "2,1 2,2 2,3 2,4 2,5 6,1 6,2 6,3 6,4 *   *   *   4,1 4,2 *   *   5,1",
  });
}

// Cells of the (9,18,12,9) Construction B array, q = 3, m = 2. Entries "ab"
// are ternary (s_1, s_0); rows are labelled (a, b0, b1), columns (u, v).
inline const std::vector<std::string> kTernaryArray{
    "01  *  * 10  *  *  * 00  *",  // (0,0,0)
    " * 02  * 11  *  *  *  * 01",  // (0,0,1)
    " *  * 00 12  *  * 02  *  *",  // (0,0,2)
    "11  *  *  * 20  *  *  * 10",  // (0,1,0)
    " * 12  *  * 21  * 11  *  *",  // (0,1,1)
    " *  * 10  * 22  *  * 12  *",  // (0,1,2)
    "21  *  *  *  * 00 20  *  *",  // (0,2,0)
    " * 22  *  *  * 01  * 21  *",  // (0,2,1)
    " *  * 20  *  * 02  *  * 22",  // (0,2,2)
    "02  *  * 20  *  *  *  * 00",  // (1,0,0)
    " * 00  * 21  *  * 01  *  *",  // (1,0,1)
    " *  * 01 22  *  *  * 02  *",  // (1,0,2)
    "12  *  *  * 00  * 10  *  *",  // (1,1,0)
    " * 10  *  * 01  *  * 11  *",  // (1,1,1)
    " *  * 11  * 02  *  *  * 12",  // (1,1,2)
    "22  *  *  *  * 10  * 20  *",  // (1,2,0)
    " * 20  *  *  * 11  *  * 21",  // (1,2,1)
    " *  * 21  *  * 12 22  *  *",  // (1,2,2)
};

// The reordered array: columns (0,0),(1,0),(2,0),(0,1),(0,2),(1,1),(1,2),(2,1),(2,2).
inline const std::vector<std::string> kTernaryOrdered{
    "01 10  *  *  *  *  * 00  *",  " * 11  * 02  *  *  *  * 01",  " * 12 02  * 00  *  *  *  *",
    "11  *  *  *  * 20  *  * 10",  " *  * 11 12  * 21  *  *  *",  " *  *  *  * 10 22  * 12  *",
    "21  * 20  *  *  * 00  *  *",  " *  *  * 22  *  * 01 21  *",  " *  *  *  * 20  * 02  * 22",
    "02 20  *  *  *  *  *  * 00",  " * 21 01 00  *  *  *  *  *",  " * 22  *  * 01  *  * 02  *",
    "12  * 10  *  * 00  *  *  *",  " *  *  * 10  * 01  * 11  *",  " *  *  *  * 11 02  *  * 12",
    "22  *  *  *  *  * 10 20  *",  " *  *  * 20  *  * 11  * 21",  " *  * 22  * 21  * 12  *  *",
};
inline const std::vector<std::string> kTernaryOrderedColumns{"(0,0)", "(1,0)", "(2,0)", "(0,1)", "(0,2)",
                                                      "(1,1)", "(1,2)", "(2,1)", "(2,2)"};

// Ternary pairs to 0-based ids.
inline Grid<Cell> ternary_table(const std::vector<std::string>& rows) {
  std::vector<std::vector<Cell>> out;
  for (const auto& line : rows) {
    auto& o = out.emplace_back();
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
      if (tok == "*") {
        o.push_back(Cell::star());
      } else {
        o.push_back(Cell::symbol(static_cast<pdacache::SymbolId>((tok[0] - '0') * 3 + (tok[1] - '0'))));
      }
    }
  }
  return Grid<Cell>::from_rows(out);
}

// --- Oracles ---------------------------------------------------------------

// sum over symbols of the load at the earliest position holding it, walking
// positions in `order`.
inline std::uint64_t naive_messages(const Grid<Cell>& g, const std::vector<std::size_t>& order,
                                    const std::vector<std::uint32_t>& loads) {
  std::set<pdacache::SymbolId> seen;
  std::uint64_t total = 0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const Cell c = g(r, order[pos]);
      if (!c.is_star() && seen.insert(c.symbol()).second) total += loads[pos];
    }
  }
  return total;
}

// Minimum message count over every column order (std::next_permutation).
inline std::uint64_t brute_force_min_messages(const Grid<Cell>& g, const std::vector<std::uint32_t>& loads) {
  std::vector<std::size_t> order(g.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t best = UINT64_MAX;
  do {
    best = std::min(best, naive_messages(g, order, loads));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Conditions broken by a grid, straight from the definition.
inline std::set<pdacache::Condition> naive_broken_conditions(const Grid<Cell>& g) {
  using pdacache::Condition;
  std::set<Condition> broken;
  std::vector<std::size_t> stars(g.cols(), 0);
  std::set<pdacache::SymbolId> symbols;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (g(r, c).is_star()) {
        ++stars[c];
      } else {
        symbols.insert(g(r, c).symbol());
      }
    }
  if (stars[0] == 0 || std::any_of(stars.begin(), stars.end(), [&](std::size_t n) { return n != stars[0]; }))
    broken.insert(Condition::C1);
  if (symbols.empty() || *symbols.rbegin() + 1 != symbols.size()) broken.insert(Condition::C2);
  for (std::size_t r1 = 0; r1 < g.rows(); ++r1)
    for (std::size_t c1 = 0; c1 < g.cols(); ++c1)
      for (std::size_t r2 = 0; r2 < g.rows(); ++r2)
        for (std::size_t c2 = 0; c2 < g.cols(); ++c2) {
          if (r1 == r2 && c1 == c2) continue;
          if (g(r1, c1).is_star() || g(r1, c1) != g(r2, c2)) continue;
          if (r1 == r2 || c1 == c2) {
            broken.insert(Condition::C3a);
          } else if (!g(r1, c2).is_star() || !g(r2, c1).is_star()) {
            broken.insert(Condition::C3b);
          }
        }
  return broken;
}

// --- Generators ------------------------------------------------------------

// Random valid PDA with F * K <= max_cells: random stars (Z per column), then
// each non-star cell joins a compatible symbol class or opens a new one.
inline Pda random_pda(std::mt19937_64& rng, std::size_t max_cells = 400) {
  std::uniform_int_distribution<std::size_t> pick_k(1, 10);
  const std::size_t k = pick_k(rng);
  const std::size_t max_f = std::min<std::size_t>(12, max_cells / k);
  std::uniform_int_distribution<std::size_t> pick_f(2, std::max<std::size_t>(2, max_f));
  const std::size_t f = pick_f(rng);
  std::uniform_int_distribution<std::size_t> pick_z(1, f - 1);
  const std::size_t z = pick_z(rng);

  std::vector<std::vector<bool>> star(f, std::vector<bool>(k, false));
  std::vector<std::size_t> rows(f);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (std::size_t c = 0; c < k; ++c) {
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i = 0; i < z; ++i) star[rows[i]][c] = true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t r = 0; r < f; ++r)
    for (std::size_t c = 0; c < k; ++c)
      if (!star[r][c]) cells.emplace_back(r, c);
  std::shuffle(cells.begin(), cells.end(), rng);

  std::bernoulli_distribution try_join(0.8);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> classes;
  Grid<Cell> grid(f, k);
  for (auto [r, c] : cells) {
    std::optional<std::size_t> chosen;
    if (try_join(rng) && !classes.empty()) {
      std::vector<std::size_t> order(classes.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t idx : order) {
        const bool ok = std::all_of(classes[idx].begin(), classes[idx].end(), [&](auto rc) {
          return rc.first != r && rc.second != c && star[r][rc.second] && star[rc.first][c];
        });
        if (ok) {
          chosen = idx;
          break;
        }
      }
    }
    if (!chosen) {
      chosen = classes.size();
      classes.emplace_back();
    }
    classes[*chosen].emplace_back(r, c);
    grid(r, c) = Cell::symbol(static_cast<pdacache::SymbolId>(*chosen));
  }
  return Pda::from_grid(std::move(grid));
}

inline pdacache::Profile random_profile(std::mt19937_64& rng, std::size_t caches, std::uint32_t max_load = 6,
                                        bool allow_zero = false) {
  std::uniform_int_distribution<std::uint32_t> pick(allow_zero ? 0 : 1, max_load);
  std::vector<std::int64_t> raw(caches);
  for (auto& x : raw) x = pick(rng);
  if (std::all_of(raw.begin(), raw.end(), [](std::int64_t v) { return v == 0; })) raw[0] = 1;
  return pdacache::normalize_profile(std::span<const std::int64_t>(raw));
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace fixtures
