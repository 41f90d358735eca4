#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace pdacache;

namespace {

const std::vector<std::uint32_t> kLoads{5, 4, 3, 2, 2, 1};

GeneralizedPda motivating_gpda() { return build_gpda(fixtures::motivating_pda(), kLoads); }

}  // namespace

TEST(Library, Deterministic) {
  const auto a = generate_library(17, 3, 64, 7);
  const auto b = generate_library(17, 3, 64, 7);
  EXPECT_EQ(a.content, b.content);
  EXPECT_EQ(a.content.size(), 17u * 3 * 64);
  EXPECT_NE(a.content, generate_library(17, 3, 64, 8).content);
}

TEST(Library, SingleByte) {
  const auto lib = generate_library(1, 1, 1, 99);
  EXPECT_EQ(lib.content.size(), 1u);
  EXPECT_EQ(lib.subfile(0, 0).size(), 1u);
}

TEST(Library, Errors) {
  EXPECT_THROW(generate_library(0, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(generate_library(1000, 1000, 1000, 1, 1 << 20), BudgetExceeded);
}

TEST(Placement, MotivatingCaches) {
  const auto pl = place(fixtures::motivating_pda());
  const std::vector<std::vector<std::size_t>> expect{{0}, {1}, {2}, {0}, {1}, {2}};
  EXPECT_EQ(pl.star_rows, expect);
  EXPECT_EQ(place(motivating_gpda()).star_rows, expect);
}

TEST(Placement, MnHalf) {
  const auto pl = place(construct_mn(4, 2));
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_EQ(pl.star_rows[c].size(), 3u);
    EXPECT_DOUBLE_EQ(pl.fraction(c, 6), 0.5);
  }
}

TEST(CacheContents, HoldsOnlyStarRows) {
  const auto lib = generate_library(3, 3, 8, 5);
  const CacheContents cache(place(fixtures::motivating_pda()), lib, 1);
  EXPECT_FALSE(cache.subfile(0, 0).has_value());
  ASSERT_TRUE(cache.subfile(2, 1).has_value());
  EXPECT_TRUE(std::equal(cache.subfile(2, 1)->begin(), cache.subfile(2, 1)->end(), lib.subfile(2, 1).begin()));
}

TEST(Deliver, MotivatingTranscript) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(17, 3, 16, 7);
  std::vector<std::size_t> demand(17);
  std::iota(demand.begin(), demand.end(), std::size_t{0});
  const auto run = deliver(g, lib, demand);
  ASSERT_EQ(run.transmissions.size(), 24u);
  EXPECT_TRUE(run.measured_load.identical(LoadValue{24, 3}));
  EXPECT_TRUE(std::is_sorted(run.transmissions.begin(), run.transmissions.end(),
                             [](const Transmission& a, const Transmission& b) { return a.tag < b.tag; }));

  // X_(1,1): user 1 row 2 and user 15 row 1, file ids 1 and 15.
  const Transmission* x11 = run.find(Tag{0, 1});
  ASSERT_NE(x11, nullptr);
  ASSERT_EQ(x11->terms.size(), 2u);
  EXPECT_EQ(x11->terms[0].user, 0u);
  EXPECT_EQ(x11->terms[0].row, 1u);
  EXPECT_EQ(x11->terms[1].user, 14u);
  EXPECT_EQ(x11->terms[1].row, 0u);
  std::vector<std::uint8_t> expect(16);
  for (std::size_t b = 0; b < 16; ++b) expect[b] = lib.subfile(0, 1)[b] ^ lib.subfile(14, 0)[b];
  EXPECT_EQ(x11->payload, expect);

  // X_(1,3): uncoded, user 3 row 2.
  const Transmission* x13 = run.find(Tag{0, 3});
  ASSERT_NE(x13, nullptr);
  ASSERT_EQ(x13->terms.size(), 1u);
  EXPECT_EQ(x13->terms[0].user, 2u);
  EXPECT_TRUE(std::equal(x13->payload.begin(), x13->payload.end(), lib.subfile(2, 1).begin()));

  std::vector<std::pair<int, int>> tags;
  for (const auto& t : run.transmissions) tags.emplace_back(t.tag.symbol + 1, t.tag.replica);
  const std::vector<std::pair<int, int>> listed{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 1}, {2, 2}, {2, 3},
                                                {2, 4}, {2, 5}, {3, 1}, {3, 2}, {3, 3}, {3, 4}, {4, 1}, {4, 2},
                                                {4, 3}, {4, 4}, {5, 1}, {5, 2}, {5, 3}, {6, 1}, {6, 2}, {6, 3}};
  EXPECT_EQ(tags, listed);
}

TEST(Deliver, ReorderedHas21) {
  const auto g = build_gpda(fixtures::motivating_pda_reordered(), kLoads);
  const auto run = deliver(g, generate_library(17, 3, 8, 1), identity_demand(17, 17));
  EXPECT_EQ(run.transmissions.size(), 21u);
}

TEST(Deliver, DedicatedCachesSendS) {
  const auto g = build_gpda(fixtures::motivating_pda(), std::vector<std::uint32_t>(6, 1));
  const auto run = deliver(g, generate_library(6, 3, 8, 1), identity_demand(6, 6));
  EXPECT_EQ(run.transmissions.size(), 6u);
}

TEST(Deliver, Errors) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(4, 3, 8, 1);
  EXPECT_THROW(deliver(g, lib, identity_demand(16, 4)), DimensionMismatch);
  auto bad = identity_demand(17, 4);
  bad[3] = 4;
  EXPECT_THROW(deliver(g, lib, bad), std::out_of_range);
  EXPECT_THROW(deliver(g, generate_library(4, 2, 8, 1), identity_demand(17, 4)), DimensionMismatch);
}

TEST(Decode, MotivatingUserFifteen) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(17, 3, 32, 11);
  const auto run = deliver(g, lib, identity_demand(17, 17));
  const CacheContents cache(place(g), lib, g.user_to_cache()[14]);
  const auto got = decode(run, g, cache, 14);
  const auto want = lib.file(14);
  EXPECT_TRUE(std::equal(got.begin(), got.end(), want.begin(), want.end()));
}

TEST(Decode, TrivialSingleUser) {
  const Pda p = Pda::from_grid(fixtures::grid_of({{0}, {1}}));
  const auto g = build_gpda(p, std::vector<std::uint32_t>{1});
  const auto run = simulate(g, generate_library(1, 2, 5, 3), std::vector<std::size_t>{0});
  EXPECT_EQ(run.transmissions.size(), 1u);
  EXPECT_TRUE(run.all_decoded());
}

TEST(Decode, MissingCacheRowIsError) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(17, 3, 8, 2);
  const auto run = deliver(g, lib, identity_demand(17, 17));
  const CacheContents wrong(place(g), lib, 1);  // user 1 belongs to cache 1, not 2
  EXPECT_THROW(decode(run, g, wrong, 0), DecodeError);
}

TEST(Simulate, BothMotivatingArrangementsDecode) {
  for (const Pda& p : {fixtures::motivating_pda(), fixtures::motivating_pda_reordered()}) {
    const auto g = build_gpda(p, kLoads);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto lib = generate_library(17, 3, 24, seed);
      EXPECT_TRUE(simulate(g, lib, identity_demand(17, 17), {true}).all_decoded());
      EXPECT_TRUE(simulate(g, lib, random_demand(17, 17, seed), {true}).all_decoded());
    }
  }
}

TEST(Simulate, TernaryArrayNineCacheProfile) {
  const Pda p = construct_b(3, 2);
  const auto prof = normalize_profile(std::span<const std::int64_t>(fixtures::kNineCacheProfile));
  const auto g = build_gpda(const_b_order(p, 3, 2, prof).result, prof);
  const auto lib = generate_library(110, 18, 8, 4);
  const auto run = simulate(g, lib, random_demand(110, 110, 4));
  EXPECT_TRUE(run.all_decoded());
  EXPECT_EQ(run.transmissions.size(), 240u);
}

TEST(Simulate, RandomCorpusDecodes) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    const Pda p = fixtures::random_pda(rng);
    const auto prof = fixtures::random_profile(rng, p.columns(), 4);
    const auto g = build_gpda(p, prof);
    const std::size_t n = 1 + rng() % 8;
    const auto lib = generate_library(n, p.rows(), 1 + rng() % 16, rng());
    for (const auto& d : {identity_demand(g.columns(), n), random_demand(g.columns(), n, rng())}) {
      const auto run = simulate(g, lib, d, {true});
      ASSERT_TRUE(run.all_decoded());
      EXPECT_TRUE(run.measured_load.identical(load_from_pda(p, prof)));
    }
  }
}

TEST(Simulate, RepeatedDemandsStillDecode) {
  // Everyone asks for one file, so terms coincide and XORs may cancel.
  std::mt19937_64 rng(52);
  for (int i = 0; i < 100; ++i) {
    const Pda p = fixtures::random_pda(rng);
    const auto prof = fixtures::random_profile(rng, p.columns(), 4);
    const auto g = build_gpda(p, prof);
    const auto lib = generate_library(1, p.rows(), 8, i);
    const auto run = simulate(g, lib, std::vector<std::size_t>(g.columns(), 0), {true});
    EXPECT_TRUE(run.all_decoded());
    EXPECT_EQ(run.transmissions.size(), load_from_pda(p, prof).numerator);
  }
}

TEST(Simulate, TransmissionCountIndependentOfDemand) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(5, 3, 8, 9);
  const auto a = deliver(g, lib, identity_demand(17, 5));
  const auto b = deliver(g, lib, random_demand(17, 5, 77));
  EXPECT_EQ(a.transmissions.size(), b.transmissions.size());
}

TEST(Simulate, PayloadIdentity) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(17, 3, 12, 3);
  const auto run = deliver(g, lib, random_demand(17, 17, 5));
  for (const auto& t : run.transmissions) EXPECT_TRUE(payload_identity_holds(t, lib));
  Transmission broken = run.transmissions.front();
  broken.payload[0] ^= 1;
  EXPECT_FALSE(payload_identity_holds(broken, lib));
}

TEST(Simulate, Deterministic) {
  const auto g = motivating_gpda();
  const auto lib = generate_library(17, 3, 12, 3);
  const auto a = simulate(g, lib, random_demand(17, 17, 5));
  const auto b = simulate(g, lib, random_demand(17, 17, 5));
  ASSERT_EQ(a.transmissions.size(), b.transmissions.size());
  for (std::size_t i = 0; i < a.transmissions.size(); ++i) EXPECT_EQ(a.transmissions[i].payload, b.transmissions[i].payload);
}
