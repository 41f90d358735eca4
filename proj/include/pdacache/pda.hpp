#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pdacache/errors.hpp"
#include "pdacache/grid.hpp"

namespace pdacache {

// 0-based internally; file and display formats are 1-based.
using SymbolId = std::uint32_t;

// Either a star (cached subfile) or a delivery symbol.
class Cell {
 public:
  constexpr Cell() = default;
  static constexpr Cell star() { return Cell{}; }
  static constexpr Cell symbol(SymbolId s) {
    Cell c;
    c.value_ = static_cast<std::int64_t>(s);
    return c;
  }

  constexpr bool is_star() const { return value_ < 0; }
  constexpr SymbolId symbol() const { return static_cast<SymbolId>(value_); }

  friend constexpr bool operator==(Cell, Cell) = default;

 private:
  std::int64_t value_ = -1;
};

// Star, or a pair (s, i) with replica index i >= 1.
class GCell {
 public:
  constexpr GCell() = default;
  static constexpr GCell star() { return GCell{}; }
  static GCell pair(SymbolId s, std::uint32_t replica) {
    if (replica < 1) throw FormatError("replica index must be at least 1");
    GCell c;
    c.symbol_ = static_cast<std::int64_t>(s);
    c.replica_ = replica;
    return c;
  }

  constexpr bool is_star() const { return symbol_ < 0; }
  constexpr SymbolId symbol() const { return static_cast<SymbolId>(symbol_); }
  constexpr std::uint32_t replica() const { return replica_; }

  friend constexpr bool operator==(GCell, GCell) = default;

 private:
  std::int64_t symbol_ = -1;
  std::uint32_t replica_ = 0;
};

enum class Condition { C1, C2, C3a, C3b, C4, CacheStarPattern };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::C1: return "C1";
    case Condition::C2: return "C2";
    case Condition::C3a: return "C3a";
    case Condition::C3b: return "C3b";
    case Condition::C4: return "C4";
    case Condition::CacheStarPattern: return "CacheStarPattern";
  }
  return "?";
}

// Coordinates are 0-based; rendering adds one.
struct Violation {
  Condition tag;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }

  bool has(Condition tag) const {
    return std::any_of(violations.begin(), violations.end(),
                       [tag](const Violation& v) { return v.tag == tag; });
  }

  std::string to_string() const {
    std::ostringstream os;
    auto list = [&os](const std::vector<std::size_t>& xs) {
      os << '{';
      for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i] + 1;
      os << '}';
    };
    for (const auto& v : violations) {
      os << pdacache::to_string(v.tag) << ": rows ";
      list(v.rows);
      os << " cols ";
      list(v.cols);
      if (!v.detail.empty()) os << " - " << v.detail;
      os << '\n';
    }
    for (const auto& w : warnings) os << "warning: " << w << '\n';
    return os.str();
  }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error("array failed validation:\n" + report.to_string()),
        report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Either a validated value or the report explaining why there is none.
template <typename T>
struct Validated {
  std::optional<T> value;
  ValidationReport report;

  bool ok() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }

  T take() && {
    if (!value) throw ValidationError(std::move(report));
    return std::move(*value);
  }
};

struct Labels {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
};

class Pda;
class GeneralizedPda;
Validated<Pda> validate_pda(Grid<Cell> grid, Labels labels = {});
Validated<GeneralizedPda> validate_gpda(Grid<GCell> grid, std::vector<std::size_t> user_to_cache);
Pda permute_columns(const Pda& pda, std::span<const std::size_t> perm);

// A (K, F, Z, S) placement delivery array. Only obtainable through validation,
// so every instance satisfies C1-C3.
class Pda {
 public:
  static Pda from_grid(Grid<Cell> grid, Labels labels = {}) {
    return validate_pda(std::move(grid), std::move(labels)).take();
  }

  std::size_t columns() const { return grid_.cols(); }
  std::size_t rows() const { return grid_.rows(); }
  std::size_t z_per_column() const { return z_; }
  std::size_t symbol_count() const { return s_; }

  const Grid<Cell>& grid() const { return grid_; }
  Cell at(std::size_t row, std::size_t col) const { return grid_(row, col); }
  const std::vector<std::string>& row_labels() const { return labels_.rows; }
  const std::vector<std::string>& column_labels() const { return labels_.cols; }
  const Labels& labels() const { return labels_; }

  // Distinct symbols of a column, ascending.
  std::vector<SymbolId> column_symbols(std::size_t col) const {
    std::vector<SymbolId> out;
    for (std::size_t r = 0; r < rows(); ++r)
      if (!grid_(r, col).is_star()) out.push_back(grid_(r, col).symbol());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<std::size_t> star_rows(std::size_t col) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < rows(); ++r)
      if (grid_(r, col).is_star()) out.push_back(r);
    return out;
  }

  friend bool operator==(const Pda& a, const Pda& b) { return a.grid_ == b.grid_; }

 private:
  Pda(Grid<Cell> grid, Labels labels, std::size_t z, std::size_t s)
      : grid_(std::move(grid)), labels_(std::move(labels)), z_(z), s_(s) {}

  friend Validated<Pda> validate_pda(Grid<Cell>, Labels);
  friend Pda permute_columns(const Pda&, std::span<const std::size_t>);

  Grid<Cell> grid_;
  Labels labels_;
  std::size_t z_ = 0;
  std::size_t s_ = 0;
};

// A (K, F, Z, [S] x [I]) generalized PDA with its user-to-cache map.
class GeneralizedPda {
 public:
  static GeneralizedPda from_grid(Grid<GCell> grid, std::vector<std::size_t> user_to_cache) {
    return validate_gpda(std::move(grid), std::move(user_to_cache)).take();
  }

  std::size_t columns() const { return grid_.cols(); }
  std::size_t rows() const { return grid_.rows(); }
  std::size_t z_per_column() const { return z_; }
  std::size_t symbol_count() const { return s_; }
  std::uint32_t max_replica() const { return max_replica_; }

  const Grid<GCell>& grid() const { return grid_; }
  GCell at(std::size_t row, std::size_t col) const { return grid_(row, col); }
  const std::vector<std::size_t>& user_to_cache() const { return user_to_cache_; }

  std::size_t cache_count() const {
    return user_to_cache_.empty()
               ? 0
               : *std::max_element(user_to_cache_.begin(), user_to_cache_.end()) + 1;
  }

  friend bool operator==(const GeneralizedPda& a, const GeneralizedPda& b) {
    return a.grid_ == b.grid_ && a.user_to_cache_ == b.user_to_cache_;
  }

 private:
  GeneralizedPda(Grid<GCell> grid, std::vector<std::size_t> user_to_cache, std::size_t z,
                 std::size_t s, std::uint32_t max_replica)
      : grid_(std::move(grid)),
        user_to_cache_(std::move(user_to_cache)),
        z_(z),
        s_(s),
        max_replica_(max_replica) {}

  friend Validated<GeneralizedPda> validate_gpda(Grid<GCell>, std::vector<std::size_t>);

  Grid<GCell> grid_;
  std::vector<std::size_t> user_to_cache_;
  std::size_t z_ = 0;
  std::size_t s_ = 0;
  std::uint32_t max_replica_ = 0;
};

namespace detail {

template <typename CellT>
std::size_t check_star_counts(const Grid<CellT>& grid, ValidationReport& report) {
  auto stars_in = [&grid](std::size_t c) {
    std::size_t n = 0;
    for (std::size_t r = 0; r < grid.rows(); ++r) n += grid(r, c).is_star() ? 1 : 0;
    return n;
  };
  const std::size_t z = stars_in(0);
  if (z == 0) {
    report.violations.push_back({Condition::C1, {}, {0}, "first column has no star (Z must be >= 1)"});
  }
  for (std::size_t c = 1; c < grid.cols(); ++c) {
    const std::size_t n = stars_in(c);
    if (n != z) {
      report.violations.push_back({Condition::C1, {}, {c},
                                   "expected " + std::to_string(z) + " stars, found " +
                                       std::to_string(n)});
    }
  }
  return z;
}

// Symbol ids must cover [0, S); returns S.
inline std::size_t check_symbol_range(const std::vector<std::size_t>& counts, ValidationReport& report,
                                      const char* what) {
  if (counts.empty()) {
    report.violations.push_back({Condition::C2, {}, {}, std::string("no ") + what + " present"});
    return 0;
  }
  for (std::size_t s = 0; s < counts.size(); ++s) {
    if (counts[s] == 0) {
      report.violations.push_back(
          {Condition::C2, {}, {}, std::string(what) + " " + std::to_string(s + 1) + " never occurs"});
    }
  }
  return counts.size();
}

// C3 over groups of equal non-star entries.
template <typename CellT>
void check_pairs(const Grid<CellT>& grid,
                 const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& groups,
                 const std::vector<std::string>& group_names, ValidationReport& report) {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& cells = groups[g];
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        auto [r1, c1] = cells[a];
        auto [r2, c2] = cells[b];
        std::vector<std::size_t> rows{std::min(r1, r2), std::max(r1, r2)};
        std::vector<std::size_t> cols{std::min(c1, c2), std::max(c1, c2)};
        if (r1 == r2 || c1 == c2) {
          report.violations.push_back({Condition::C3a, std::move(rows), std::move(cols),
                                       group_names[g] + " repeated in one row or column"});
        } else if (!grid(r1, c2).is_star() || !grid(r2, c1).is_star()) {
          report.violations.push_back({Condition::C3b, std::move(rows), std::move(cols),
                                       group_names[g] + " without star cross cells"});
        }
      }
    }
  }
}

}  // namespace detail

inline Validated<Pda> validate_pda(Grid<Cell> grid, Labels labels) {
  if (grid.empty()) throw FormatError("empty grid");
  if (!labels.rows.empty() && labels.rows.size() != grid.rows())
    throw FormatError("row_labels length does not match rows");
  if (!labels.cols.empty() && labels.cols.size() != grid.cols())
    throw FormatError("col_labels length does not match cols");

  Validated<Pda> out;
  auto& report = out.report;
  const std::size_t z = detail::check_star_counts(grid, report);

  std::vector<std::size_t> counts;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      if (grid(r, c).is_star()) continue;
      const SymbolId s = grid(r, c).symbol();
      if (s >= counts.size()) counts.resize(std::size_t{s} + 1, 0);
      ++counts[s];
    }
  }
  const std::size_t s_count = detail::check_symbol_range(counts, report, "symbol");

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups(s_count);
  for (std::size_t r = 0; r < grid.rows(); ++r)
    for (std::size_t c = 0; c < grid.cols(); ++c)
      if (!grid(r, c).is_star()) groups[grid(r, c).symbol()].emplace_back(r, c);
  std::vector<std::string> names;
  names.reserve(s_count);
  for (std::size_t s = 0; s < s_count; ++s) names.push_back("symbol " + std::to_string(s + 1));
  detail::check_pairs(grid, groups, names, report);

  if (report.ok()) out.value = Pda(std::move(grid), std::move(labels), z, s_count);
  return out;
}

inline Validated<GeneralizedPda> validate_gpda(Grid<GCell> grid,
                                               std::vector<std::size_t> user_to_cache) {
  if (grid.empty()) throw FormatError("empty grid");
  if (user_to_cache.size() != grid.cols())
    throw FormatError("user_to_cache length does not match cols");

  Validated<GeneralizedPda> out;
  auto& report = out.report;
  const std::size_t z = detail::check_star_counts(grid, report);

  // C2 over both coordinates; per-symbol replica gaps are only warnings.
  std::vector<std::size_t> symbol_counts;
  std::vector<std::size_t> replica_counts;
  std::map<std::pair<SymbolId, std::uint32_t>, std::vector<std::pair<std::size_t, std::size_t>>> by_tag;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const GCell g = grid(r, c);
      if (g.is_star()) continue;
      if (g.symbol() >= symbol_counts.size()) symbol_counts.resize(std::size_t{g.symbol()} + 1, 0);
      ++symbol_counts[g.symbol()];
      if (g.replica() > replica_counts.size()) replica_counts.resize(g.replica(), 0);
      ++replica_counts[g.replica() - 1];
      by_tag[{g.symbol(), g.replica()}].emplace_back(r, c);
    }
  }
  // Caches with no users drop their symbols, so absent ids are only warnings.
  const std::size_t s_count = symbol_counts.size();
  for (std::size_t s = 0; s < s_count; ++s)
    if (symbol_counts[s] == 0) report.warnings.push_back("symbol " + std::to_string(s + 1) + " never occurs");
  const std::size_t max_replica = detail::check_symbol_range(replica_counts, report, "replica index");

  std::vector<std::uint32_t> top(s_count, 0);
  for (const auto& [tag, cells] : by_tag) top[tag.first] = std::max(top[tag.first], tag.second);
  for (std::size_t s = 0; s < s_count; ++s) {
    for (std::uint32_t i = 1; i < top[s]; ++i) {
      if (!by_tag.contains({static_cast<SymbolId>(s), i})) {
        report.warnings.push_back("pair (" + std::to_string(s + 1) + "," + std::to_string(i) +
                                  ") absent below max replica " + std::to_string(top[s]));
      }
    }
  }

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups;
  std::vector<std::string> names;
  for (auto& [tag, cells] : by_tag) {
    groups.push_back(cells);
    names.push_back("pair (" + std::to_string(tag.first + 1) + "," + std::to_string(tag.second) + ")");
  }
  detail::check_pairs(grid, groups, names, report);

  // C4: (s,i1) and (s,i2) sharing a row force identical stars elsewhere.
  for (std::size_t j1 = 0; j1 < grid.rows(); ++j1) {
    for (std::size_t k1 = 0; k1 < grid.cols(); ++k1) {
      const GCell a = grid(j1, k1);
      if (a.is_star()) continue;
      for (std::size_t k2 = 0; k2 < grid.cols(); ++k2) {
        const GCell b = grid(j1, k2);
        if (k2 == k1 || b.is_star() || b.symbol() != a.symbol()) continue;
        for (std::size_t j2 = 0; j2 < grid.rows(); ++j2) {
          if (j2 == j1) continue;
          if (grid(j2, k1).is_star() && !grid(j2, k2).is_star()) {
            report.violations.push_back({Condition::C4,
                                         {j1, j2},
                                         {k1, k2},
                                         "symbol " + std::to_string(a.symbol() + 1) +
                                             " shared in a row but star patterns differ"});
          }
        }
      }
    }
  }

  // Users of one cache must see the same cached rows.
  std::map<std::size_t, std::size_t> first_user;
  for (std::size_t k = 0; k < grid.cols(); ++k) {
    auto [it, inserted] = first_user.emplace(user_to_cache[k], k);
    if (inserted) continue;
    const std::size_t ref = it->second;
    for (std::size_t r = 0; r < grid.rows(); ++r) {
      if (grid(r, k).is_star() != grid(r, ref).is_star()) {
        report.violations.push_back({Condition::CacheStarPattern,
                                     {r},
                                     {ref, k},
                                     "users of cache " + std::to_string(user_to_cache[k] + 1) +
                                         " differ in star rows"});
        break;
      }
    }
  }

  if (report.ok()) {
    out.value = GeneralizedPda(std::move(grid), std::move(user_to_cache), z, s_count,
                               static_cast<std::uint32_t>(max_replica));
  }
  return out;
}

inline Pda permute_columns(const Pda& pda, std::span<const std::size_t> perm) {
  if (perm.size() != pda.columns()) throw DimensionMismatch("permutation length differs from column count");
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw std::invalid_argument("not a permutation of the columns");
    seen[p] = true;
  }
  Labels labels;
  labels.rows = pda.row_labels();
  if (!pda.column_labels().empty())
    for (std::size_t p : perm) labels.cols.push_back(pda.column_labels()[p]);
  return Pda(pda.grid().permute_columns(perm), std::move(labels), pda.z_per_column(), pda.symbol_count());
}

struct SymbolStats {
  std::vector<std::size_t> occurrences;              // g_s
  std::vector<std::vector<std::size_t>> columns_of;  // ascending column indices

  // g when every symbol occurs equally often.
  std::optional<std::size_t> regularity() const {
    if (occurrences.empty()) return std::nullopt;
    for (std::size_t g : occurrences)
      if (g != occurrences.front()) return std::nullopt;
    return occurrences.front();
  }
};

inline SymbolStats symbol_stats(const Pda& pda) {
  SymbolStats st;
  st.occurrences.assign(pda.symbol_count(), 0);
  st.columns_of.assign(pda.symbol_count(), {});
  for (std::size_t c = 0; c < pda.columns(); ++c) {
    for (std::size_t r = 0; r < pda.rows(); ++r) {
      const Cell cell = pda.at(r, c);
      if (cell.is_star()) continue;
      ++st.occurrences[cell.symbol()];
      auto& cols = st.columns_of[cell.symbol()];
      if (cols.empty() || cols.back() != c) cols.push_back(c);
    }
  }
  return st;
}

}  // namespace pdacache
