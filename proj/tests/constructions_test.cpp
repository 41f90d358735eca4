#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace pdacache;

namespace {

// Brute-force MN parameters: count subsets directly.
struct MnCounts {
  std::size_t rows = 0, z = 0, symbols = 0;
};

MnCounts mn_counts(std::size_t n, std::size_t t) {
  MnCounts out;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto bits = static_cast<std::size_t>(std::popcount(mask));
    if (bits == t) {
      ++out.rows;
      if (mask & 1U) ++out.z;
    }
    if (bits == t + 1) ++out.symbols;
  }
  return out;
}

}  // namespace

TEST(ConstructMn, NineCacheBaselineSize) {
  const Pda p = construct_mn(9, 6);
  EXPECT_EQ(p.rows(), 84u);
  EXPECT_EQ(p.z_per_column(), 56u);
  EXPECT_EQ(p.symbol_count(), 36u);
}

TEST(ConstructMn, TwoCaches) {
  const Pda p = construct_mn(2, 1);
  EXPECT_EQ(p.grid(), fixtures::grid_of({{0, 1}, {1, 0}}));
}

TEST(ConstructMn, FourCachesMatchesEnumeration) {
  const Pda p = construct_mn(4, 2);
  const auto expect = mn_counts(4, 2);
  EXPECT_EQ(p.rows(), expect.rows);
  EXPECT_EQ(p.z_per_column(), expect.z);
  EXPECT_EQ(p.symbol_count(), expect.symbols);
  EXPECT_EQ(symbol_stats(p).regularity(), std::optional<std::size_t>(3));
}

TEST(ConstructMn, ParametersAcrossRange) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t t = 1; t < n; ++t) {
      const Pda p = construct_mn(n, t);
      const auto expect = mn_counts(n, t);
      EXPECT_EQ(p.rows(), expect.rows);
      EXPECT_EQ(p.z_per_column(), expect.z);
      EXPECT_EQ(p.symbol_count(), expect.symbols);
      EXPECT_EQ(symbol_stats(p).regularity(), std::optional<std::size_t>(t + 1));
      EXPECT_EQ(p.z_per_column() * n, p.rows() * t);  // Z/F = t/n
    }
  }
}

TEST(ConstructMn, Errors) {
  EXPECT_THROW(construct_mn(4, 0), std::invalid_argument);
  EXPECT_THROW(construct_mn(4, 4), std::invalid_argument);
  EXPECT_THROW(construct_mn(40, 20), BudgetExceeded);
}

TEST(ConstructB, ReproducesTernaryArray) {
  const Pda p = construct_b(3, 2);
  EXPECT_EQ(p.grid(), fixtures::ternary_table(fixtures::kTernaryArray));
  EXPECT_EQ(p.columns(), 9u);
  EXPECT_EQ(p.rows(), 18u);
  EXPECT_EQ(p.z_per_column(), 12u);
  EXPECT_EQ(p.symbol_count(), 9u);
  EXPECT_EQ(p.row_labels().front(), "(0,0,0)");
  EXPECT_EQ(p.row_labels()[5], "(0,1,2)");
  EXPECT_EQ(p.column_labels()[6], "(2,0)");
}

TEST(ConstructB, SmallestInstance) {
  const Pda p = construct_b(2, 1);
  EXPECT_EQ(p.columns(), 4u);
  EXPECT_EQ(p.rows(), 2u);
  EXPECT_EQ(p.z_per_column(), 1u);
  EXPECT_EQ(p.symbol_count(), 2u);
}

TEST(ConstructB, TwoTwoCounts) {
  const Pda p = construct_b(2, 2);
  EXPECT_EQ(p.columns(), 6u);
  EXPECT_EQ(p.rows(), 4u);
  EXPECT_EQ(p.z_per_column(), 2u);
  EXPECT_EQ(p.symbol_count(), 4u);
  EXPECT_EQ(symbol_stats(p).occurrences, std::vector<std::size_t>(4, 3));
}

TEST(ConstructB, ColumnMembershipAcrossParameters) {
  for (std::size_t q = 2; q <= 5; ++q) {
    for (std::size_t m = 1; m <= 3; ++m) {
      const ConstBParams params{q, m};
      if (params.rows() * params.columns() > 20000) continue;
      const Pda p = construct_b(q, m);
      EXPECT_EQ(p.columns(), params.columns());
      EXPECT_EQ(p.rows(), params.rows());
      EXPECT_EQ(p.z_per_column(), params.z());
      EXPECT_EQ(p.symbol_count(), params.symbols());
      EXPECT_EQ(p.z_per_column() * q, p.rows() * (q - 1));
      EXPECT_EQ(symbol_stats(p).regularity(), std::optional<std::size_t>((q - 1) * (m + 1)));

      for (std::size_t c = 0; c < p.columns(); ++c) {
        const std::size_t u = c / q, v = c % q;
        // Distinct symbols within a column.
        EXPECT_EQ(p.column_symbols(c).size(), p.rows() - p.z_per_column());
        std::vector<SymbolId> expect;
        for (SymbolId s = 0; s < p.symbol_count(); ++s) {
          std::size_t digits = s, sum = 0, coord = 0;
          for (std::size_t i = 0; i < m; ++i) {
            if (i == u) coord = digits % q;
            sum += digits % q;
            digits /= q;
          }
          const bool present = u < m ? coord != v : sum % q != v;
          if (present) expect.push_back(s);
        }
        EXPECT_EQ(p.column_symbols(c), expect) << "q=" << q << " m=" << m << " column " << c;
      }
    }
  }
}

TEST(ConstructB, Errors) {
  EXPECT_THROW(construct_b(1, 2), std::invalid_argument);
  EXPECT_THROW(construct_b(3, 0), std::invalid_argument);
  EXPECT_THROW(construct_b(10, 8), BudgetExceeded);
}

TEST(ConstructB, LabelsDetected) {
  const auto p = detect_const_b(construct_b(3, 2));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->q, 3u);
  EXPECT_EQ(p->m, 2u);
  EXPECT_FALSE(detect_const_b(fixtures::motivating_pda()).has_value());
  EXPECT_FALSE(ConstBColLabel::parse("(1,2) x").has_value());
  EXPECT_EQ(ConstBColLabel::parse("(1,2)"), (ConstBColLabel{1, 2}));
}
