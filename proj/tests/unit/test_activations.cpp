#include <gtest/gtest.h>

#include "moralaxis/analytics.hpp"
#include "moralaxis/framing.hpp"
#include "synthetic.hpp"

using namespace moralaxis;

TEST(Summarize, Examples) {
  const std::vector<double> flat(100, 0.5);
  const auto s = summarize(flat);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);
  EXPECT_EQ(s.sd, 0.0);
  EXPECT_EQ(s.ci95_half_width, 0.0);
  EXPECT_EQ(summarize(std::vector<double>(57, 0.1)).ci95_half_width, 0.0);

  const std::vector<double> two{0, 1};
  const auto t = summarize(two);
  EXPECT_DOUBLE_EQ(t.mean, 0.5);
  EXPECT_NEAR(t.sd, 0.707107, 1e-6);
  EXPECT_NEAR(t.ci95_half_width, 0.98, 1e-12);

  const std::vector<double> one{3.0};
  EXPECT_EQ(summarize(one).sd, 0.0);
  EXPECT_THROW(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST(ClusterActivations, ZeroVarianceAndWeightedMean) {
  moralaxis::Rng rng(4);
  std::vector<MoralEmbedding> emb(300);
  std::vector<std::size_t> labels(300);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    labels[i] = i % 3;
    emb[i].doc_id = fmt::format("d{}", i);
    for (auto& v : emb[i].values) v = rng.uniform();
    if (labels[i] == 0) emb[i].values[1] = 0.5;
  }
  const auto acts = cluster_activations(emb, labels, 3);
  ASSERT_EQ(acts.size(), 4u);
  EXPECT_EQ(acts[0].group, "0");
  EXPECT_EQ(acts[3].group, "all");
  EXPECT_DOUBLE_EQ(acts[0].dims[1].mean, 0.5);
  EXPECT_EQ(acts[0].dims[1].ci95_half_width, 0.0);
  EXPECT_EQ(acts[0].dims[1].n, 100u);

  for (std::size_t d = 0; d < kEmbeddingWidth; ++d) {
    double weighted = 0;
    for (std::size_t c = 0; c < 3; ++c) weighted += acts[c].dims[d].mean * static_cast<double>(acts[c].dims[d].n);
    EXPECT_NEAR(weighted / 300.0, acts[3].dims[d].mean, 1e-9);
  }

  emb[0].mode = EmbeddingMode::FrameAxis;
  EXPECT_THROW(cluster_activations(emb, labels, 3), std::invalid_argument);
}

TEST(ConfidenceIntervals, CoverageOnStandardNormal) {
  moralaxis::Rng rng(2024);
  std::size_t covered = 0;
  std::vector<double> sample(2000);
  for (int trial = 0; trial < 300; ++trial) {
    for (auto& x : sample) x = rng.normal();
    const auto s = summarize(sample);
    if (std::abs(s.mean) <= s.ci95_half_width) ++covered;
  }
  EXPECT_GE(covered, 270u);
  EXPECT_LE(covered, 300u);
}

TEST(StandardizeColumns, ZeroMeanUnitSd) {
  Matrix m(4, 2);
  const double vals[4][2] = {{1, 5}, {2, 5}, {3, 5}, {4, 5}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = vals[i][j];
  const auto z = standardize_columns(m);
  double mean = 0, ss = 0;
  for (int i = 0; i < 4; ++i) mean += z(i, 0) / 4;
  for (int i = 0; i < 4; ++i) ss += z(i, 0) * z(i, 0);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(ss / 3), 1.0, 1e-12);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(z(i, 1), 0.0);
}
