#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "moralaxis/framing.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace moralaxis;

namespace {

LexiconEntry entry(const std::string& term, Foundation f, double sentiment) {
  LexiconEntry e;
  e.term = term;
  e.probs[index_of(f)] = 0.9;
  e.sentiment = sentiment;
  return e;
}

// Five orthogonal foundation axes in R^5; "help"/"kill" are the Care poles.
struct OrthogonalWorld {
  MoralLexicon lexicon;
  EmbeddingTable table{5, "mem"};
  AxisSet axes;

  OrthogonalWorld() {
    std::vector<LexiconEntry> entries;
    for (Foundation f : kFoundations) {
      const auto i = index_of(f);
      const std::string v = i == 0 ? "help" : fmt::format("virtue{}", i);
      const std::string x = i == 0 ? "kill" : fmt::format("vice{}", i);
      entries.push_back(entry(v, f, 0.8));
      entries.push_back(entry(x, f, -0.8));
      std::vector<double> e(5, 0.0);
      e[i] = 1.0;
      table.insert(v, e);
      e[i] = -1.0;
      table.insert(x, e);
    }
    entries.push_back(entry("attack", Foundation::Care, 0.0));
    table.insert("attack", std::vector<double>{-3, 0.5, 0, 0, 0});
    entries.push_back(entry("harm", Foundation::Care, 0.0));
    table.insert("harm", std::vector<double>{-1, 1, 0, 0, 0});
    lexicon = MoralLexicon::from_entries(entries);
    axes = build_axes(lexicon, table);
  }
};

void expect_scores_near(const MoralScore& a, const MoralScore& b, double tol) {
  for (std::size_t f = 0; f < kFoundationCount; ++f) {
    EXPECT_NEAR(a.bias[f], b.bias[f], tol);
    EXPECT_NEAR(a.virtue[f], b.virtue[f], tol);
    EXPECT_NEAR(a.vice[f], b.vice[f], tol);
    EXPECT_NEAR(a.intensity[f], b.intensity[f], tol);
  }
}

}  // namespace

TEST(BuildAxes, Examples) {
  std::vector<LexiconEntry> entries;
  EmbeddingTable table(2, "mem");
  entries.push_back(entry("cv1", Foundation::Care, 0.5));
  entries.push_back(entry("cv2", Foundation::Care, 0.5));
  entries.push_back(entry("cx1", Foundation::Care, -0.5));
  entries.push_back(entry("cx2", Foundation::Care, -0.5));
  table.insert("cv1", std::vector<double>{2, 0});
  table.insert("cv2", std::vector<double>{0, 2});
  table.insert("cx1", std::vector<double>{-2, 0});
  table.insert("cx2", std::vector<double>{0, -2});
  for (Foundation f : kFoundations) {
    if (f == Foundation::Care) continue;
    const std::string v = fmt::format("v{}", index_of(f)), x = fmt::format("x{}", index_of(f));
    entries.push_back(entry(v, f, 0.5));
    entries.push_back(entry(x, f, -0.5));
    table.insert(v, std::vector<double>{1, 0});
    table.insert(x, std::vector<double>{-1, 0});
  }
  const auto axes = build_axes(MoralLexicon::from_entries(entries), table);
  ASSERT_EQ(axes.axes.size(), 5u);
  EXPECT_NEAR(axes.axis(Foundation::Care).direction[0], 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(axes.axis(Foundation::Care).direction[1], 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(axes.axis(Foundation::Loyalty).direction[0], 1.0, 1e-15);
  EXPECT_NEAR(axes.axis(Foundation::Loyalty).direction[1], 0.0, 1e-15);
  for (Foundation f : kFoundations) EXPECT_EQ(axes.axis(f).foundation, f);
}

TEST(BuildAxes, Errors) {
  OrthogonalWorld w;
  auto entries = std::vector<LexiconEntry>{};
  for (const auto& [t, e] : w.lexicon.entries()) entries.push_back(e);
  entries.push_back(entry("pure", Foundation::Sanctity, 0.4));  // no vector, harmless

  EmbeddingTable missing(5, "mem");
  for (const auto& t : w.table.terms())
    if (t != "vice3") missing.insert(t, *w.table.find(t));
  try {
    build_axes(MoralLexicon::from_entries(entries), missing);
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("authority"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("vice"), std::string::npos) << e.what();
  }

  EmbeddingTable same(5, "mem");
  for (const auto& t : w.table.terms())
    same.insert(t, t == "vice2" ? *w.table.find("virtue2") : *w.table.find(t));
  EXPECT_THROW(build_axes(w.lexicon, same), std::runtime_error);
}

TEST(ProjectWord, Examples) {
  OrthogonalWorld w;
  EXPECT_DOUBLE_EQ(*project_word("help", w.axes.axis(Foundation::Care), w.table), 1.0);
  EXPECT_FALSE(project_word("nowhere", w.axes.axis(Foundation::Care), w.table).has_value());

  EmbeddingTable t(2, "mem");
  t.insert("w", std::vector<double>{1, 1});
  FoundationAxis axis;
  axis.direction = {1, 0};
  EXPECT_NEAR(*project_word("w", axis, t), 0.707107, 1e-6);
}

TEST(ScoreDocument, HelpKillHelp) {
  OrthogonalWorld w;
  const std::vector<std::string> doc{"help", "kill", "help"};
  const auto s = score_document(doc, w.lexicon, w.axes, w.table, "d1");
  ASSERT_TRUE(s);
  const auto care = index_of(Foundation::Care);
  EXPECT_NEAR(s->bias[care], 1.0 / 3, 1e-12);
  EXPECT_NEAR(s->virtue[care], 2.0 / 3, 1e-12);
  EXPECT_NEAR(s->vice[care], 1.0 / 3, 1e-12);
  EXPECT_NEAR(s->intensity[care], 1.0, 1e-12);
  EXPECT_EQ(s->contributing_tokens, 3u);
  EXPECT_EQ(s->doc_id, "d1");

  const auto poles = embed(*s, EmbeddingMode::Poles);
  const std::array<double, 10> want_poles = {2.0 / 3, 1.0 / 3, 0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(poles.values[i], want_poles[i], 1e-12) << i;
  const auto frame = embed(*s, EmbeddingMode::FrameAxis);
  const std::array<double, 10> want_frame = {1.0 / 3, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(frame.values[i], want_frame[i], 1e-12) << i;
  EXPECT_EQ(frame.values.size(), 10u);
}

TEST(ScoreDocument, NoLexiconMemberIsAbsent) {
  OrthogonalWorld w;
  const std::vector<std::string> doc{"the", "city", "today"};
  EXPECT_FALSE(score_document(doc, w.lexicon, w.axes, w.table));
  EXPECT_FALSE(score_document(std::vector<std::string>{}, w.lexicon, w.axes, w.table));
}

TEST(ScoreDocument, SingleVirtueToken) {
  OrthogonalWorld w;
  for (Foundation f : kFoundations) {
    const std::string term = f == Foundation::Care ? "help" : fmt::format("virtue{}", index_of(f));
    const auto s = score_document(std::vector<std::string>{term}, w.lexicon, w.axes, w.table);
    ASSERT_TRUE(s);
    for (std::size_t g = 0; g < kFoundationCount; ++g) {
      EXPECT_GE(s->bias[g], 0.0);
      EXPECT_EQ(s->vice[g], 0.0);
    }
    EXPECT_DOUBLE_EQ(s->bias[index_of(f)], 1.0);
  }
}

TEST(ComputeBaseline, Examples) {
  OrthogonalWorld w;
  const auto care = index_of(Foundation::Care);
  const auto one = *score_document(std::vector<std::string>{"help"}, w.lexicon, w.axes, w.table);
  EXPECT_DOUBLE_EQ(compute_baseline(std::vector{one}, w.axes, BaselineMode::Corpus).baseline_bias[care], 1.0);

  const auto neg = *score_document(std::vector<std::string>{"kill"}, w.lexicon, w.axes, w.table);
  const auto b = compute_baseline(std::vector{one, neg}, w.axes, BaselineMode::Corpus);
  EXPECT_DOUBLE_EQ(b.baseline_bias[care], 0.0);

  const auto z = compute_baseline(std::vector{one, neg}, w.axes, BaselineMode::Zero);
  for (double x : z.baseline_bias) EXPECT_EQ(x, 0.0);

  // Token-weighted: a three-token document outweighs a one-token one.
  const auto three = *score_document(std::vector<std::string>{"help", "help", "help"}, w.lexicon, w.axes, w.table);
  EXPECT_DOUBLE_EQ(compute_baseline(std::vector{three, neg}, w.axes, BaselineMode::Corpus).baseline_bias[care], 0.5);

  EXPECT_THROW(compute_baseline(std::vector<MoralScore>{}, w.axes, BaselineMode::Corpus), std::invalid_argument);
}

TEST(ScoreDocument, IntensityUsesBaseline) {
  OrthogonalWorld w;
  auto axes = w.axes;
  axes.baseline_bias[index_of(Foundation::Care)] = 1.0;
  const auto s = score_document(std::vector<std::string>{"kill"}, w.lexicon, axes, w.table);
  EXPECT_DOUBLE_EQ(s->intensity[index_of(Foundation::Care)], 4.0);
}

TEST(FoundationVocabulary, AttackHeadsCareVice) {
  OrthogonalWorld w;
  const std::map<std::string, std::size_t> corpus = {{"attack", 3}, {"harm", 5}, {"kill", 1}, {"help", 2}, {"other", 9}};
  const auto v = foundation_vocabulary(corpus, w.lexicon, w.axes, w.table, 20);
  const auto& care_vice = v.list(Foundation::Care, Polarity::Vice);
  ASSERT_FALSE(care_vice.empty());
  // kill projects to exactly -1 on the Care axis; attack is next
  EXPECT_EQ(care_vice[0].term, "kill");
  EXPECT_EQ(care_vice[1].term, "attack");
  EXPECT_EQ(v.list(Foundation::Care, Polarity::Virtue)[0].term, "help");
  for (Foundation f : kFoundations)
    for (Polarity p : {Polarity::Virtue, Polarity::Vice})
      for (const auto& t : v.list(f, p)) EXPECT_NE(t.term, "other");

  const auto top1 = foundation_vocabulary(std::map<std::string, std::size_t>{{"attack", 3}, {"harm", 5}}, w.lexicon,
                                          w.axes, w.table, 1);
  EXPECT_EQ(top1.list(Foundation::Care, Polarity::Vice)[0].term, "attack");

  const auto none = foundation_vocabulary(corpus, w.lexicon, w.axes, w.table, 0);
  for (Foundation f : kFoundations)
    for (Polarity p : {Polarity::Virtue, Polarity::Vice}) EXPECT_TRUE(none.list(f, p).empty());
}

TEST(EmbeddingColumns, Layouts) {
  const auto poles = embedding_columns(EmbeddingMode::Poles);
  EXPECT_EQ(poles[0], "care_virtue");
  EXPECT_EQ(poles[9], "sanctity_vice");
  const auto frame = embedding_columns(EmbeddingMode::FrameAxis);
  EXPECT_EQ(frame[0], "care_bias");
  EXPECT_EQ(frame[3], "fairness_intensity");
  EXPECT_EQ(parse_embedding_mode("frameaxis"), EmbeddingMode::FrameAxis);
  EXPECT_THROW(parse_embedding_mode("bogus"), std::invalid_argument);
  EXPECT_EQ(parse_baseline_mode("zero"), BaselineMode::Zero);
}

TEST(ScoringProperties, NaiveOracleAgreement) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto fx = synth::random_scoring_fixture(seed);
    const auto lexicon = fx.build_lexicon();
    const auto table = fx.build_table();
    auto axes = build_axes(lexicon, table);
    moralaxis::Rng rng(seed + 1000);
    for (auto& b : axes.baseline_bias) b = 2 * rng.uniform() - 1;

    const auto naive_axes = oracle::naive_axes(fx.lexicon, fx.vectors);
    const auto want = oracle::naive_score(fx.tokens, fx.lexicon, fx.vectors, naive_axes, axes.baseline_bias);
    const auto got = score_document(fx.tokens, lexicon, axes, table);
    ASSERT_TRUE(got);
    ASSERT_EQ(got->contributing_tokens, want.n);
    for (std::size_t f = 0; f < 5; ++f) {
      EXPECT_NEAR(got->bias[f], want.bias[f], 1e-9) << seed;
      EXPECT_NEAR(got->virtue[f], want.virtue[f], 1e-9) << seed;
      EXPECT_NEAR(got->vice[f], want.vice[f], 1e-9) << seed;
      EXPECT_NEAR(got->intensity[f], want.intensity[f], 1e-9) << seed;
    }
  }
}

TEST(ScoringProperties, BoundsIdentityAndUnitAxes) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto fx = synth::random_scoring_fixture(seed);
    const auto lexicon = fx.build_lexicon();
    const auto table = fx.build_table();
    auto axes = build_axes(lexicon, table);
    for (const auto& a : axes.axes) EXPECT_NEAR(norm(a.direction), 1.0, 1e-9);
    axes.baseline_bias.fill(seed % 2 ? 1.0 : -1.0);
    const auto s = *score_document(fx.tokens, lexicon, axes, table);
    for (std::size_t f = 0; f < 5; ++f) {
      EXPECT_NEAR(s.bias[f], s.virtue[f] - s.vice[f], 1e-9);
      EXPECT_GE(s.bias[f], -1.0);
      EXPECT_LE(s.bias[f], 1.0);
      EXPECT_GE(s.virtue[f], 0.0);
      EXPECT_LE(s.virtue[f], 1.0);
      EXPECT_GE(s.vice[f], 0.0);
      EXPECT_LE(s.vice[f], 1.0);
      EXPECT_GE(s.intensity[f], 0.0);
      EXPECT_LE(s.intensity[f], 4.0);
    }
  }
}

TEST(ScoringProperties, PermutationAndScaleInvariance) {
  std::mt19937 shuffler(9);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto fx = synth::random_scoring_fixture(seed);
    const auto lexicon = fx.build_lexicon();
    const auto table = fx.build_table();
    const auto axes = build_axes(lexicon, table);
    const auto base = *score_document(fx.tokens, lexicon, axes, table);

    auto shuffled = fx.tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), shuffler);
    const auto perm = *score_document(shuffled, lexicon, axes, table);
    EXPECT_EQ(perm.bias, base.bias);
    EXPECT_EQ(perm.intensity, base.intensity);

    for (double c : {1e-3, 0.5, 7.0, 1e4}) {
      const auto scaled_table = table.scaled(c);
      const auto scaled_axes = build_axes(lexicon, scaled_table);
      expect_scores_near(*score_document(fx.tokens, lexicon, scaled_axes, scaled_table), base, 1e-9);
    }
  }
}

TEST(ScoringProperties, AddingHighProjectionTokenRaisesBias) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto fx = synth::random_scoring_fixture(seed);
    const auto lexicon = fx.build_lexicon();
    const auto table = fx.build_table();
    const auto axes = build_axes(lexicon, table);
    const auto before = *score_document(fx.tokens, lexicon, axes, table);
    for (const auto& e : fx.lexicon) {
      if (!table.contains(e.term)) continue;
      auto longer = fx.tokens;
      longer.push_back(e.term);
      const auto after = *score_document(longer, lexicon, axes, table);
      for (Foundation f : kFoundations) {
        const double p = *project_word(e.term, axes.axis(f), table);
        if (p > before.bias[index_of(f)] + 1e-12) {
          EXPECT_GT(after.bias[index_of(f)], before.bias[index_of(f)]);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}
