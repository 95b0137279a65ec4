#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "moralaxis/digest.hpp"
#include "moralaxis/pipeline.hpp"
#include "synthetic.hpp"

using namespace moralaxis;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = FIXTURE_DIR;

PipelineConfig fixture_config(const fs::path& out_dir) {
  auto c = load_pipeline_config(kFixtures / "fixture.conf");
  c.corpus = kFixtures / c.corpus;
  c.embeddings = kFixtures / c.embeddings;
  c.lexicon = kFixtures / c.lexicon;
  c.out_dir = out_dir;
  return c;
}

nlohmann::json groups(const GroupCounts& g) {
  return {{"BlackLivesMatter", g[0]}, {"AllBlueLivesMatter", g[1]}, {"DefundThePolice", g[2]}};
}

std::vector<std::string> csv_ids(const fs::path& file, std::string* digest_line = nullptr) {
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  if (digest_line) *digest_line = line;
  std::getline(in, line);  // header
  std::vector<std::string> ids;
  while (std::getline(in, line)) ids.push_back(line.substr(0, line.find(',')));
  return ids;
}

}  // namespace

TEST(PipelineConfigFile, LoadsOptions) {
  const auto c = load_pipeline_config(kFixtures / "fixture.conf");
  EXPECT_EQ(c.corpus, fs::path("corpus.jsonl"));
  EXPECT_EQ(c.k_min, 2u);
  EXPECT_EQ(c.k_max, 6u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.vocab_min_count, 3u);
  EXPECT_DOUBLE_EQ(c.tsne_perplexity, 20.0);
  EXPECT_EQ(c.restarts, 10u);  // untouched default

  synth::TempDir dir("conf");
  synth::write_file(dir / "bad.conf", "k-range = \"5..2\"\n");
  EXPECT_THROW(load_pipeline_config(dir / "bad.conf"), std::runtime_error);
  synth::write_file(dir / "bad2.conf", "baseline = \"sideways\"\n");
  EXPECT_THROW(load_pipeline_config(dir / "bad2.conf"), std::runtime_error);
}

TEST(StageSeeds, DistinctAndStable) {
  const auto a = derive_stage_seeds(7), b = derive_stage_seeds(7), c = derive_stage_seeds(8);
  EXPECT_EQ(a.selection, b.selection);
  EXPECT_EQ(a.tsne, b.tsne);
  EXPECT_NE(a.selection, c.selection);
  const std::set<std::uint64_t> s{a.selection, a.silhouette, a.tsne, a.tsne_sample};
  EXPECT_EQ(s.size(), 4u);
}

TEST(FixturePipeline, StageCountsMatchLedger) {
  synth::TempDir out("fixture");
  const auto r = run_pipeline(fixture_config(out.path()));
  const auto ledger = nlohmann::json::parse(synth::read_file(kFixtures / "stage_counts.json"));
  const auto& c = r.counts;
  EXPECT_EQ(c.lines, ledger["lines"]);
  EXPECT_EQ(c.malformed, ledger["malformed"]);
  EXPECT_EQ(c.ingested, ledger["ingested"]);
  EXPECT_EQ(c.geo_kept, ledger["geo_kept"]);
  EXPECT_EQ(c.date_kept, ledger["date_kept"]);
  EXPECT_EQ(c.keyword_matched, ledger["keyword_matched"]);
  EXPECT_EQ(groups(c.keyword_per_group), ledger["keyword_matched_per_group"]);
  EXPECT_EQ(c.deduplicated, ledger["deduplicated"]);
  EXPECT_EQ(groups(c.dedup_per_group), ledger["deduplicated_per_group"]);
  EXPECT_EQ(c.moral, ledger["moral"]);
  EXPECT_EQ(groups(c.moral_per_group), ledger["moral_per_group"]);
  EXPECT_EQ(c.non_moral_dropped, ledger["non_moral_dropped"]);
  EXPECT_EQ(c.projected, ledger["projected"]);

  // non-increasing through the moral filter
  const std::vector<std::size_t> chain{c.ingested, c.geo_kept, c.date_kept, c.keyword_matched, c.deduplicated, c.moral};
  EXPECT_TRUE(std::is_sorted(chain.rbegin(), chain.rend()));
}

TEST(FixturePipeline, ArtifactsReferenceDigestAndShareDocIds) {
  synth::TempDir out("fixture");
  const auto r = run_pipeline(fixture_config(out.path()));
  ASSERT_FALSE(fs::exists(out / "_FAILED"));
  for (const char* name : {"daily_counts.csv", "scores.csv", "labels.csv", "selection.csv", "tsne.csv"}) {
    std::string first;
    csv_ids(out / name, &first);
    EXPECT_EQ(first, "# manifest_digest=" + r.manifest_digest) << name;
  }
  for (const char* name : {"clusters.json", "vocabulary.json", "foundation_vocab.json"}) {
    const auto j = nlohmann::json::parse(synth::read_file(out / name));
    EXPECT_EQ(j["manifest_digest"], r.manifest_digest) << name;
  }
  const auto manifest = nlohmann::json::parse(synth::read_file(out / "manifest.json"));
  EXPECT_EQ(manifest["manifest_digest"], r.manifest_digest);
  for (const auto& [name, sha] : manifest["artifacts"].items()) EXPECT_EQ(sha, sha256_file(out / name)) << name;

  const auto scores = csv_ids(out / "scores.csv");
  const auto labels = csv_ids(out / "labels.csv");
  const auto tsne = csv_ids(out / "tsne.csv");
  EXPECT_EQ(scores.size(), r.counts.moral);
  EXPECT_EQ(std::set<std::string>(scores.begin(), scores.end()).size(), scores.size());
  EXPECT_EQ(scores, labels);
  EXPECT_EQ(std::multiset<std::string>(tsne.begin(), tsne.end()), std::multiset<std::string>(scores.begin(), scores.end()));
}

TEST(FixturePipeline, ByteIdenticalReruns) {
  synth::TempDir a("rerun"), b("rerun");
  const auto ra = run_pipeline(fixture_config(a.path()));
  const auto rb = run_pipeline(fixture_config(b.path()));
  EXPECT_EQ(ra.manifest_digest, rb.manifest_digest);
  ASSERT_EQ(ra.artifacts, rb.artifacts);
  for (const auto& name : ra.artifacts) EXPECT_EQ(synth::read_file(a / name), synth::read_file(b / name)) << name;
}

TEST(FixturePipeline, SeedChangesClusteringDigest) {
  auto c = fixture_config("unused");
  const auto a = analyze(c, Stage::Cluster);
  c.seed = 8;
  const auto b = analyze(c, Stage::Cluster);
  EXPECT_NE(a.manifest_digest, b.manifest_digest);
  EXPECT_EQ(a.counts.moral, b.counts.moral);
}

TEST(FixturePipeline, IngestStageNeedsNoModel) {
  synth::TempDir out("ingest");
  auto c = fixture_config(out.path());
  c.embeddings.clear();
  c.lexicon.clear();
  const auto r = run_pipeline(c, Stage::Ingest);
  EXPECT_EQ(r.counts.deduplicated, 124u);
  EXPECT_TRUE(fs::exists(out / "daily_counts.csv"));
  EXPECT_FALSE(fs::exists(out / "scores.csv"));
}

TEST(FixturePipeline, AllowPlaceAdmitsPlacePosts) {
  auto c = fixture_config("unused");
  c.allow_place = true;
  const auto r = analyze(c, Stage::Ingest);
  EXPECT_EQ(r.counts.geo_kept, 178u);
}

TEST(Pipeline, ZeroMoralDocumentsFails) {
  synth::TempDir dir("zero");
  synth::write_file(dir / "corpus.jsonl",
                    R"({"id":"1","text":"#BLM downtown today","created_at":"2020-06-01T00:00:00Z","latitude":34,"longitude":-118.2})"
                    "\n"
                    R"({"id":"2","text":"defund the police now","created_at":"2020-06-02T00:00:00Z","latitude":34,"longitude":-118.2})"
                    "\n");
  auto c = fixture_config(dir / "out");
  c.corpus = dir / "corpus.jsonl";
  try {
    run_pipeline(c);
    FAIL() << "expected failure";
  } catch (const PipelineError& e) {
    EXPECT_NE(std::string(e.what()).find("0 moral documents"), std::string::npos) << e.what();
    EXPECT_EQ(e.stage(), "score");
  }
  const auto marker = synth::read_file(dir / "out" / "_FAILED");
  EXPECT_NE(marker.find("stage: score"), std::string::npos) << marker;
  EXPECT_NE(marker.find("0 moral documents"), std::string::npos) << marker;
}

TEST(Pipeline, SuccessfulRunClearsStaleMarker) {
  synth::TempDir out("marker");
  synth::write_file(out / "_FAILED", "stage: old\n");
  run_pipeline(fixture_config(out.path()), Stage::Score);
  EXPECT_FALSE(fs::exists(out / "_FAILED"));
}

TEST(Pipeline, MissingCorpusFailsInIngest) {
  synth::TempDir out("missing");
  auto c = fixture_config(out.path());
  c.corpus = out / "nope.jsonl";
  EXPECT_THROW(run_pipeline(c), PipelineError);
  EXPECT_NE(synth::read_file(out / "_FAILED").find("stage: ingest"), std::string::npos);
}
