#include <gtest/gtest.h>

#include "moralaxis/analytics.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace moralaxis;

TEST(SelectK, SingleCandidate) {
  const auto pts = synth::planted_blobs(3, 60, 3, 1.0, 10.0, 2, nullptr);
  const auto t = select_k(pts, {.k_min = 2, .k_max = 2, .seed = 1});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].k, 2u);
  EXPECT_EQ(t.chosen_k, 2u);
}

TEST(SelectK, TableRowsAreConsistent) {
  const auto pts = synth::planted_blobs(4, 400, 10, 1.0, 10.0, 3, nullptr);
  const auto t = select_k(pts, {.k_min = 2, .k_max = 8, .seed = 5});
  ASSERT_EQ(t.rows.size(), 7u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    EXPECT_EQ(r.k, i + 2);
    EXPECT_LE(r.min_cluster_fraction, r.max_cluster_fraction);
    EXPECT_EQ(r.eligible, r.min_cluster_fraction >= 0.02);
    const auto model = kmeans(pts, {.k = r.k, .seed = kmeans_seed_for(5, r.k)});
    EXPECT_EQ(model.inertia, r.inertia);
  }
  EXPECT_EQ(t.chosen_k, 4u);
  EXPECT_FALSE(t.fallback);
}

TEST(SelectK, FallbackWhenNothingEligible) {
  const auto pts = synth::planted_blobs(2, 20, 2, 1.0, 10.0, 3, nullptr);
  const auto t = select_k(pts, {.k_min = 2, .k_max = 3, .seed = 1, .min_cluster_fraction = 0.9});
  EXPECT_TRUE(t.fallback);
  EXPECT_EQ(t.chosen_k, 2u);
}

TEST(SelectK, Errors) {
  const auto pts = synth::planted_blobs(2, 20, 2, 1.0, 10.0, 3, nullptr);
  EXPECT_THROW(select_k(pts, {.k_min = 1, .k_max = 3}), std::invalid_argument);
  EXPECT_THROW(select_k(pts, {.k_min = 4, .k_max = 3}), std::invalid_argument);
  EXPECT_THROW(select_k(pts, {.k_min = 2, .k_max = 30}), std::invalid_argument);
}

TEST(SelectK, PlantedFourBlobsAcrossSeeds) {
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto pts = synth::planted_blobs(4, 2000, 10, 1.0, 10.0, 7000 + seed, nullptr);
    if (select_k(pts, {.k_min = 2, .k_max = 8, .seed = seed}).chosen_k == 4) ++hits;
  }
  EXPECT_GE(hits, 95u);
}
