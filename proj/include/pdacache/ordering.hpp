#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdacache/budget.hpp"
#include "pdacache/constructions.hpp"
#include "pdacache/pda.hpp"
#include "pdacache/profile.hpp"
#include "pdacache/rate.hpp"

namespace pdacache {

// Fixed-width set of symbol ids.
class SymbolSet {
 public:
  SymbolSet() = default;
  explicit SymbolSet(std::size_t universe) : words_((universe + 63) / 64, 0) {}

  void insert(SymbolId s) { words_[s / 64] |= std::uint64_t{1} << (s % 64); }
  bool contains(SymbolId s) const { return (words_[s / 64] >> (s % 64)) & 1U; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::size_t intersection_count(const SymbolSet& o) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) n += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return n;
  }

  std::size_t difference_count(const SymbolSet& o) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) n += static_cast<std::size_t>(std::popcount(words_[i] & ~o.words_[i]));
    return n;
  }

  void unite(const SymbolSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }

  std::vector<SymbolId> to_vector() const {
    std::vector<SymbolId> out;
    for (std::size_t i = 0; i < words_.size(); ++i)
      for (std::uint64_t w = words_[i]; w != 0; w &= w - 1)
        out.push_back(static_cast<SymbolId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
};

inline std::vector<SymbolSet> column_symbol_sets(const Pda& pda) {
  std::vector<SymbolSet> out(pda.columns(), SymbolSet(pda.symbol_count()));
  for (std::size_t c = 0; c < pda.columns(); ++c)
    for (std::size_t r = 0; r < pda.rows(); ++r)
      if (!pda.at(r, c).is_star()) out[c].insert(pda.at(r, c).symbol());
  return out;
}

// perm[j] is the source column placed at position j; result is the reordered PDA.
struct ColumnOrdering {
  std::vector<std::size_t> perm;
  Pda result;

  static ColumnOrdering apply(const Pda& source, std::vector<std::size_t> perm) {
    Pda reordered = permute_columns(source, perm);
    return {std::move(perm), std::move(reordered)};
  }
};

struct TieRecord {
  std::size_t position;  // 1-based position being filled
  std::vector<std::vector<std::size_t>> candidates;  // source columns (pairs at position 1)
};

struct OrderingTrace {
  std::vector<std::vector<SymbolId>> prefix_symbol_sets;  // I_1 .. I_K
  std::size_t alpha = 0;                                  // first prefix with |I| = S, 1-based
  std::vector<std::size_t> intersection_numbers;          // |symbols(col_j) & I_{j-1}|; 0 at j = 1
  std::vector<TieRecord> tie_log;
  std::optional<std::size_t> regularity;                  // g for g-regular arrays
};

// Trace of an arrangement as it stands.
inline OrderingTrace trace_ordering(const Pda& ordered) {
  OrderingTrace tr;
  const auto sets = column_symbol_sets(ordered);
  SymbolSet seen(ordered.symbol_count());
  for (std::size_t c = 0; c < ordered.columns(); ++c) {
    tr.intersection_numbers.push_back(c == 0 ? 0 : sets[c].intersection_count(seen));
    seen.unite(sets[c]);
    tr.prefix_symbol_sets.push_back(seen.to_vector());
    if (tr.alpha == 0 && seen.count() == ordered.symbol_count()) tr.alpha = c + 1;
  }
  tr.regularity = symbol_stats(ordered).regularity();
  return tr;
}

struct GreedyOptions {
  // Break ties by looking one step ahead at the next best intersection number.
  bool lookahead = false;
};

struct OrderingResult {
  ColumnOrdering ordering;
  OrderingTrace trace;
};

// Max-intersection greedy arrangement: best pair first, then the column
// overlapping most with the symbols seen so far until all S have appeared,
// then the rest in ascending index. Ties go to the smallest index.
inline OrderingResult greedy_order(const Pda& pda, const Profile& profile, GreedyOptions opts = {}) {
  if (profile.size() != pda.columns())
    throw DimensionMismatch("profile has " + std::to_string(profile.size()) + " caches, PDA has " +
                            std::to_string(pda.columns()) + " columns");
  const std::size_t k = pda.columns();
  const std::size_t s_total = pda.symbol_count();
  const auto sets = column_symbol_sets(pda);
  std::vector<bool> used(k, false);
  std::vector<std::size_t> perm;
  std::vector<TieRecord> ties;

  // Best intersection any unused column achieves against `seen`.
  auto next_best = [&](const SymbolSet& seen, const std::vector<bool>& taken) -> std::size_t {
    if (seen.count() == s_total) return pda.rows() - pda.z_per_column();
    std::size_t best = 0;
    for (std::size_t c = 0; c < k; ++c)
      if (!taken[c]) best = std::max(best, sets[c].intersection_count(seen));
    return best;
  };

  SymbolSet seen(s_total);
  if (k == 1) {
    perm.push_back(0);
    used[0] = true;
  } else {
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> tied;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const std::size_t n = sets[a].intersection_count(sets[b]);
        if (tied.empty() || n > best) {
          best = n;
          tied.assign(1, {a, b});
        } else if (n == best) {
          tied.emplace_back(a, b);
        }
      }
    }
    std::size_t pick = 0;
    if (tied.size() > 1) {
      TieRecord rec{1, {}};
      for (auto [a, b] : tied) rec.candidates.push_back({a, b});
      ties.push_back(std::move(rec));
      if (opts.lookahead) {
        std::size_t best_next = 0;
        for (std::size_t t = 0; t < tied.size(); ++t) {
          SymbolSet u = sets[tied[t].first];
          u.unite(sets[tied[t].second]);
          auto taken = used;
          taken[tied[t].first] = taken[tied[t].second] = true;
          const std::size_t n = next_best(u, taken);
          if (t == 0 || n > best_next) {
            best_next = n;
            pick = t;
          }
        }
      }
    }
    for (std::size_t c : {tied[pick].first, tied[pick].second}) {
      perm.push_back(c);
      used[c] = true;
      seen.unite(sets[c]);
    }
  }

  while (perm.size() < k && seen.count() < s_total) {
    std::size_t best = 0;
    std::vector<std::size_t> tied;
    for (std::size_t c = 0; c < k; ++c) {
      if (used[c]) continue;
      const std::size_t n = sets[c].intersection_count(seen);
      if (tied.empty() || n > best) {
        best = n;
        tied.assign(1, c);
      } else if (n == best) {
        tied.push_back(c);
      }
    }
    std::size_t pick = tied.front();
    if (tied.size() > 1) {
      TieRecord rec{perm.size() + 1, {}};
      for (std::size_t c : tied) rec.candidates.push_back({c});
      ties.push_back(std::move(rec));
      if (opts.lookahead) {
        std::size_t best_next = 0;
        for (std::size_t t = 0; t < tied.size(); ++t) {
          SymbolSet u = seen;
          u.unite(sets[tied[t]]);
          auto taken = used;
          taken[tied[t]] = true;
          const std::size_t n = next_best(u, taken);
          if (t == 0 || n > best_next) {
            best_next = n;
            pick = tied[t];
          }
        }
      }
    }
    perm.push_back(pick);
    used[pick] = true;
    seen.unite(sets[pick]);
  }

  for (std::size_t c = 0; c < k; ++c)
    if (!used[c]) perm.push_back(c);

  auto ordering = ColumnOrdering::apply(pda, std::move(perm));
  OrderingTrace trace = trace_ordering(ordering.result);
  trace.tie_log = std::move(ties);
  return {std::move(ordering), std::move(trace)};
}

// Closed-form arrangement for Construction B arrays: (0,0), (1,0), ..., (m-1,0),
// then the u = m column missing the one uncovered tuple, then the rest by label.
inline ColumnOrdering const_b_order(const Pda& pda, std::size_t q, std::size_t m, const Profile& profile) {
  if (profile.size() != pda.columns()) throw DimensionMismatch("profile length differs from column count");
  const auto labels = const_b_column_labels(pda);
  if (!labels) throw std::invalid_argument("PDA lacks (u,v) column labels");
  const auto detected = detect_const_b(pda);
  if (!detected || detected->q != q || detected->m != m)
    throw std::invalid_argument("column labels are inconsistent with Construction B for q=" + std::to_string(q) +
                                ", m=" + std::to_string(m));

  auto index_of = [&](ConstBColLabel want) {
    for (std::size_t c = 0; c < labels->size(); ++c)
      if ((*labels)[c] == want) return c;
    throw std::invalid_argument("missing column label " + want.to_string());
  };

  const auto sets = column_symbol_sets(pda);
  std::vector<std::size_t> perm;
  std::vector<bool> used(pda.columns(), false);
  SymbolSet seen(pda.symbol_count());
  for (std::size_t u = 0; u < m; ++u) {
    const std::size_t c = index_of({u, 0});
    perm.push_back(c);
    used[c] = true;
    seen.unite(sets[c]);
  }

  std::vector<SymbolId> missing;
  for (SymbolId s = 0; s < pda.symbol_count(); ++s)
    if (!seen.contains(s)) missing.push_back(s);
  if (missing.size() != 1) throw std::logic_error("first m columns should leave exactly one tuple uncovered");

  std::optional<std::size_t> closer;
  for (std::size_t v = 0; v < q; ++v) {
    const std::size_t c = index_of({m, v});
    if (sets[c].contains(missing.front())) continue;
    if (closer) throw std::logic_error("more than one u = m column avoids the uncovered tuple");
    closer = c;
  }
  if (!closer) throw std::logic_error("no u = m column avoids the uncovered tuple");
  perm.push_back(*closer);
  used[*closer] = true;

  std::vector<std::size_t> rest;
  for (std::size_t c = 0; c < pda.columns(); ++c)
    if (!used[c]) rest.push_back(c);
  std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return (*labels)[a] < (*labels)[b]; });
  perm.insert(perm.end(), rest.begin(), rest.end());
  return ColumnOrdering::apply(pda, std::move(perm));
}

// Number of arrangements left after identifying positions with equal loads.
inline std::uint64_t symmetry_reduced_count(const Profile& profile) {
  std::uint64_t count = 1;
  std::uint64_t remaining = profile.size();
  for (std::size_t i = 0; i < profile.size();) {
    std::size_t j = i;
    while (j < profile.size() && profile[j] == profile[i]) ++j;
    count = detail::mul_sat(count, detail::binomial(remaining, j - i));
    remaining -= j - i;
    i = j;
  }
  return count;
}

struct ExhaustiveResult {
  ColumnOrdering ordering;
  LoadValue minimum;
  std::uint64_t leaves = 0;  // complete arrangements reached
};

// Exact minimum of sum_s L_{tau_s} over all column arrangements. Positions
// with equal load are interchangeable, so columns within such a run are kept
// ascending; a partial cost plus uncovered * L_min bound prunes the rest. The
// lexicographically first optimal arrangement (in that canonical form) wins.
inline ExhaustiveResult exhaustive_order(const Pda& pda, const Profile& profile,
                                         std::uint64_t budget = permutation_budget()) {
  if (profile.size() != pda.columns()) throw DimensionMismatch("profile length differs from column count");
  const std::uint64_t space = symmetry_reduced_count(profile);
  if (space > budget)
    throw BudgetExceeded("exhaustive search needs " +
                         (space == detail::kSaturated ? std::string("too many") : std::to_string(space)) +
                         " arrangements, budget is " + std::to_string(budget));

  const std::size_t k = pda.columns();
  const std::size_t s_total = pda.symbol_count();
  const auto& loads = profile.loads();
  const std::uint64_t floor_load = loads.back();
  const auto sets = column_symbol_sets(pda);

  std::vector<bool> run_continues(k, false);  // position p shares its load with p - 1
  for (std::size_t p = 1; p < k; ++p) run_continues[p] = loads[p] == loads[p - 1];

  std::vector<std::size_t> cur;
  std::vector<bool> used(k, false);
  std::vector<std::size_t> best_perm;
  std::uint64_t best = detail::kSaturated;
  std::uint64_t leaves = 0;

  auto finish = [&](std::uint64_t cost) {
    ++leaves;
    if (cost >= best) return;
    best = cost;
    best_perm = cur;
    for (std::size_t c = 0; c < k; ++c)
      if (!used[c]) best_perm.push_back(c);
  };

  auto dfs = [&](auto&& self, const SymbolSet& seen, std::uint64_t cost) -> void {
    const std::size_t covered = seen.count();
    if (covered == s_total || cur.size() == k) {
      finish(cost);
      return;
    }
    if (cost + (s_total - covered) * floor_load >= best) return;
    const std::size_t p = cur.size();
    const std::size_t lowest = run_continues[p] ? cur.back() + 1 : 0;
    for (std::size_t c = lowest; c < k; ++c) {
      if (used[c]) continue;
      SymbolSet next = seen;
      next.unite(sets[c]);
      used[c] = true;
      cur.push_back(c);
      self(self, next, cost + sets[c].difference_count(seen) * std::uint64_t{loads[p]});
      cur.pop_back();
      used[c] = false;
    }
  };
  dfs(dfs, SymbolSet(s_total), 0);

  return {ColumnOrdering::apply(pda, std::move(best_perm)), LoadValue{best, pda.rows()}, leaves};
}

// alpha of an arrangement; checks alpha <= K - g + 1 for g-regular arrays.
inline std::size_t alpha_star(const OrderingTrace& trace) {
  if (trace.regularity) {
    const std::size_t k = trace.prefix_symbol_sets.size();
    if (trace.alpha + *trace.regularity > k + 1)
      throw std::logic_error("alpha exceeds K - g + 1 for a g-regular array");
  }
  return trace.alpha;
}

}  // namespace pdacache
