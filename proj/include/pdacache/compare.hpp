#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdacache/constructions.hpp"
#include "pdacache/ordering.hpp"
#include "pdacache/rate.hpp"

namespace pdacache {

struct ComparisonRow {
  std::string strategy;                // identity, greedy, exhaustive, const-b, mn-baseline
  std::vector<std::size_t> ordering;   // source column per sorted position; empty for mn-baseline
  std::optional<std::size_t> alpha;
  LoadValue load;
  std::size_t subpacketization = 0;
  std::string note;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<std::string> skipped;  // strategies not run, with the reason
  std::optional<LoadValue> const_b_ordered;    // closed forms, when (u,v) labels are present
  std::optional<LoadValue> const_b_unordered;

  const ComparisonRow* find(const std::string& name) const {
    for (const auto& r : rows)
      if (r.strategy == name) return &r;
    return nullptr;
  }
};

struct CompareOptions {
  std::uint64_t permutation_budget = pdacache::permutation_budget();
  std::uint64_t cell_budget = pdacache::cell_budget();
  bool lookahead = false;
};

// Loads of every applicable strategy for one PDA and profile. The identity
// row keeps physical cache lambda on column lambda.
inline ComparisonReport run_compare(const Pda& pda, const Profile& profile, CompareOptions opts = {}) {
  if (profile.size() != pda.columns()) throw DimensionMismatch("profile length differs from column count");
  ComparisonReport report;
  const std::size_t f = pda.rows();

  auto add = [&](std::string name, const ColumnOrdering& o, std::string note = {}) {
    report.rows.push_back({std::move(name), o.perm, trace_ordering(o.result).alpha, load_from_pda(o.result, profile), f,
                           std::move(note)});
  };

  add("identity", ColumnOrdering::apply(pda, profile.relabeling()));
  add("greedy", greedy_order(pda, profile, GreedyOptions{opts.lookahead}).ordering);

  try {
    auto ex = exhaustive_order(pda, profile, opts.permutation_budget);
    add("exhaustive", ex.ordering, std::to_string(ex.leaves) + " leaves");
  } catch (const BudgetExceeded& e) {
    report.skipped.push_back(std::string("exhaustive: ") + e.what());
  }

  if (auto p = detect_const_b(pda, opts.cell_budget)) {
    auto o = const_b_order(pda, p->q, p->m, profile);
    add("const-b", o, "q=" + std::to_string(p->q) + ", m=" + std::to_string(p->m));
    report.const_b_ordered = load_const_b_ordered(p->q, p->m, profile);
    report.const_b_unordered = load_const_b_unordered(p->q, p->m, profile);
  } else {
    report.skipped.push_back("const-b: no consistent (u,v) column labels");
  }

  // MN with the same number of caches and memory ratio, when t = K Z / F is whole.
  const std::uint64_t kz = std::uint64_t{pda.columns()} * pda.z_per_column();
  if (kz % f == 0 && kz / f >= 1 && kz / f < pda.columns()) {
    const std::size_t t = kz / f;
    try {
      const Pda mn = construct_mn(pda.columns(), t, opts.cell_budget);
      report.rows.push_back({"mn-baseline", {}, std::nullopt, load_from_pda(mn, profile), mn.rows(),
                             "t=" + std::to_string(t) + ", own subpacketization"});
    } catch (const BudgetExceeded& e) {
      report.skipped.push_back(std::string("mn-baseline: ") + e.what());
    }
  } else {
    report.skipped.push_back("mn-baseline: K*Z/F is not an integer in [1, K)");
  }
  return report;
}

}  // namespace pdacache
