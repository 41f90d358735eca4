#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdacache/budget.hpp"
#include "pdacache/pda.hpp"

namespace pdacache {

namespace detail {

inline void check_cells(std::uint64_t rows, std::uint64_t cols, std::uint64_t budget) {
  const std::uint64_t cells = mul_sat(rows, cols);
  if (cells > budget) {
    throw BudgetExceeded("array would have " +
                         (cells == kSaturated ? std::string("too many") : std::to_string(cells)) +
                         " cells, budget is " + std::to_string(budget));
  }
}

// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

inline std::string brace_list(const std::vector<std::size_t>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i] + 1);
  return s + "}";
}

}  // namespace detail

// Maddah-Ali-Niesen PDA: rows are t-subsets T, symbols are (t+1)-subsets,
// cell (T, k) = star iff k in T, else the symbol T + {k}.
inline Pda construct_mn(std::size_t num_caches, std::size_t t, std::uint64_t budget = cell_budget()) {
  if (t < 1 || t >= num_caches) throw std::invalid_argument("construct_mn requires 1 <= t < caches");
  detail::check_cells(detail::binomial(num_caches, t), num_caches, budget);

  const auto rows = detail::subsets(num_caches, t);
  std::map<std::vector<std::size_t>, SymbolId> symbol_of;
  for (const auto& s : detail::subsets(num_caches, t + 1))
    symbol_of.emplace(s, static_cast<SymbolId>(symbol_of.size()));

  Grid<Cell> grid(rows.size(), num_caches);
  Labels labels;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    labels.rows.push_back(detail::brace_list(rows[r]));
    for (std::size_t k = 0; k < num_caches; ++k) {
      if (std::find(rows[r].begin(), rows[r].end(), k) != rows[r].end()) continue;
      auto sym = rows[r];
      sym.insert(std::upper_bound(sym.begin(), sym.end(), k), k);
      grid(r, k) = Cell::symbol(symbol_of.at(sym));
    }
  }
  for (std::size_t k = 0; k < num_caches; ++k) labels.cols.push_back(std::to_string(k + 1));
  return Pda::from_grid(std::move(grid), std::move(labels));
}

// Row index (a, b_0, ..., b_{m-1}) of a Construction B array.
struct ConstBRowLabel {
  std::size_t a = 0;
  std::vector<std::size_t> b;

  std::string to_string() const {
    std::string s = "(" + std::to_string(a);
    for (std::size_t x : b) s += "," + std::to_string(x);
    return s + ")";
  }
};

// Column index (u, v): u in [0, m], v in [0, q).
struct ConstBColLabel {
  std::size_t u = 0;
  std::size_t v = 0;

  std::string to_string() const { return "(" + std::to_string(u) + "," + std::to_string(v) + ")"; }

  static std::optional<ConstBColLabel> parse(const std::string& text) {
    std::size_t u = 0, v = 0;
    char open = 0, comma = 0, close = 0;
    std::istringstream in(text);
    if (!(in >> open >> u >> comma >> v >> close) || open != '(' || comma != ',' || close != ')') return std::nullopt;
    in >> std::ws;
    if (!in.eof()) return std::nullopt;
    return ConstBColLabel{u, v};
  }

  friend bool operator==(const ConstBColLabel&, const ConstBColLabel&) = default;
  friend auto operator<=>(const ConstBColLabel&, const ConstBColLabel&) = default;
};

struct ConstBParams {
  std::size_t q = 0;
  std::size_t m = 0;

  std::uint64_t columns() const { return q * (m + 1); }
  std::uint64_t rows() const { return (q - 1) * power(m); }
  std::uint64_t z() const { return (q - 1) * (q - 1) * power(m - 1); }
  std::uint64_t symbols() const { return power(m); }

  std::uint64_t power(std::size_t e) const {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < e; ++i) p = detail::mul_sat(p, q);
    return p;
  }
};

// Construction B: K = q(m+1), F = (q-1)q^m, Z = (q-1)^2 q^(m-1), S = q^m.
//
// With t_i = b_{m-1-i}: column (u, v), u < m, holds a symbol iff t_u = v, the
// symbol being t with t_u replaced by (v + a + 1) mod q. Column (m, v) holds t
// itself iff sum(t) = v - 1 - a (mod q). Symbol ids are base-q values of t
// with t_{m-1} most significant.
inline Pda construct_b(std::size_t q, std::size_t m, std::uint64_t budget = cell_budget()) {
  if (q < 2 || m < 1) throw std::invalid_argument("construct_b requires q >= 2 and m >= 1");
  const ConstBParams p{q, m};
  detail::check_cells(p.rows(), p.columns(), budget);

  const std::size_t rows = p.rows();
  const std::size_t cols = p.columns();
  const std::size_t block = p.power(m);
  Grid<Cell> grid(rows, cols);
  Labels labels;

  auto symbol_of = [q](const std::vector<std::size_t>& t) {
    std::uint64_t id = 0;
    for (std::size_t i = t.size(); i-- > 0;) id = id * q + t[i];
    return Cell::symbol(static_cast<SymbolId>(id));
  };

  for (std::size_t r = 0; r < rows; ++r) {
    ConstBRowLabel row{r / block, std::vector<std::size_t>(m)};
    std::size_t rest = r % block;
    for (std::size_t i = m; i-- > 0;) {
      row.b[i] = rest % q;
      rest /= q;
    }
    labels.rows.push_back(row.to_string());

    std::vector<std::size_t> t(m);
    std::size_t digit_sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      t[i] = row.b[m - 1 - i];
      digit_sum += t[i];
    }

    for (std::size_t u = 0; u <= m; ++u) {
      for (std::size_t v = 0; v < q; ++v) {
        const std::size_t c = u * q + v;
        if (u < m) {
          if (t[u] != v) continue;
          auto sym = t;
          sym[u] = (v + row.a + 1) % q;
          grid(r, c) = symbol_of(sym);
        } else {
          // v - 1 - a mod q, kept non-negative.
          const std::size_t target = (v + 2 * q - 1 - row.a) % q;
          if (digit_sum % q == target) grid(r, c) = symbol_of(t);
        }
      }
    }
  }
  for (std::size_t u = 0; u <= m; ++u)
    for (std::size_t v = 0; v < q; ++v) labels.cols.push_back(ConstBColLabel{u, v}.to_string());

  return Pda::from_grid(std::move(grid), std::move(labels));
}

// Reads (u, v) labels back; nullopt unless every column carries one.
inline std::optional<std::vector<ConstBColLabel>> const_b_column_labels(const Pda& pda) {
  if (pda.column_labels().size() != pda.columns()) return std::nullopt;
  std::vector<ConstBColLabel> out;
  for (const auto& s : pda.column_labels()) {
    auto l = ConstBColLabel::parse(s);
    if (!l) return std::nullopt;
    out.push_back(*l);
  }
  return out;
}

// Recovers (q, m) from labels and confirms every labelled column equals the
// generated column with that label.
inline std::optional<ConstBParams> detect_const_b(const Pda& pda, std::uint64_t budget = cell_budget()) {
  auto labels = const_b_column_labels(pda);
  if (!labels) return std::nullopt;
  std::size_t max_u = 0, max_v = 0;
  for (const auto& l : *labels) {
    max_u = std::max(max_u, l.u);
    max_v = std::max(max_v, l.v);
  }
  const ConstBParams p{max_v + 1, max_u};
  if (p.q < 2 || p.m < 1 || p.columns() != pda.columns() || p.rows() != pda.rows()) return std::nullopt;
  const Pda reference = construct_b(p.q, p.m, budget);
  std::vector<bool> seen(pda.columns(), false);
  for (std::size_t c = 0; c < pda.columns(); ++c) {
    const std::size_t ref = (*labels)[c].u * p.q + (*labels)[c].v;
    if (seen[ref]) return std::nullopt;
    seen[ref] = true;
    for (std::size_t r = 0; r < pda.rows(); ++r)
      if (pda.at(r, c) != reference.at(r, ref)) return std::nullopt;
  }
  return p;
}

}  // namespace pdacache
