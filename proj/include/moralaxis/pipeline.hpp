#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moralaxis/analytics.hpp"
#include "moralaxis/corpus.hpp"
#include "moralaxis/framing.hpp"
#include "moralaxis/projection.hpp"

namespace CLI {
class App;
}

namespace moralaxis {

inline constexpr const char* kToolVersion = "0.3.0";

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  std::filesystem::path lexicon;
  std::optional<std::filesystem::path> sentiment;
  std::optional<std::filesystem::path> keywords_file;
  std::filesystem::path out_dir = "out";

  GeoBox bbox;
  DateRange dates;
  bool allow_place = false;

  double lexicon_min_probability = 0.0;
  BaselineMode baseline = BaselineMode::Corpus;
  EmbeddingMode embedding_mode = EmbeddingMode::Poles;
  bool standardize = false;

  std::optional<std::size_t> k;  // overrides the silhouette choice
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  double min_cluster_fraction = 0.02;
  std::optional<std::size_t> silhouette_cap = 10000;

  std::size_t vocab_min_count = 5;
  std::size_t vocab_top_n = 20;
  std::size_t foundation_top_n = 20;

  double tsne_perplexity = 30.0;
  std::size_t tsne_iterations = 1000;
  double tsne_learning_rate = 200.0;
  std::size_t tsne_max_points = 50000;

  std::uint64_t seed = 0;
};

/// Terminal stage of a run. Report and Project both need Cluster; All runs
/// everything.
enum class Stage { Ingest, Score, Cluster, Report, Project, All };

std::string_view stage_name(Stage s);

/// Seeds of each randomized stage, derived from the root seed by name.
struct StageSeeds {
  std::uint64_t selection = 0;
  std::uint64_t silhouette = 0;
  std::uint64_t tsne = 0;
  std::uint64_t tsne_sample = 0;
};

StageSeeds derive_stage_seeds(std::uint64_t root);

struct StageCounts {
  std::size_t lines = 0;
  std::size_t malformed = 0;
  std::size_t ingested = 0;
  std::size_t geo_kept = 0;
  std::size_t date_kept = 0;
  std::size_t keyword_matched = 0;
  GroupCounts keyword_per_group{};
  std::size_t deduplicated = 0;
  GroupCounts dedup_per_group{};
  std::size_t moral = 0;
  GroupCounts moral_per_group{};
  std::size_t non_moral_dropped = 0;
  std::size_t projected = 0;
};

struct PipelineResult {
  Stage stage = Stage::All;
  StageCounts counts;
  std::vector<Document> documents;  // moral documents sorted by doc_id (deduplicated set before scoring)
  std::vector<MoralScore> scores;
  std::vector<MoralEmbedding> embeddings;       // configured layout
  std::vector<MoralEmbedding> pole_embeddings;  // always poles, for activation summaries
  std::optional<AxisSet> axes;
  std::optional<FoundationVocabulary> foundation_vocab;
  std::optional<SelectionTable> selection;
  std::optional<ClusterModel> model;
  std::optional<SilhouetteReport> model_silhouette;
  std::vector<ActivationSummary> activations;  // per cluster, then "all"
  std::optional<ActivationSummary> corpus_activation;
  std::optional<VocabularyReport> vocabulary;
  std::optional<Projection> projection;
  std::vector<std::size_t> projected_rows;  // document indices behind each t-SNE row
  DailySeries daily;
  std::string manifest_digest;
  std::vector<std::string> artifacts;  // file names written
};

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Runs every stage up to `terminal` and writes that stage's artifacts plus
/// manifest.json into config.out_dir. On failure a `_FAILED` marker naming the
/// stage is written and PipelineError is thrown.
PipelineResult run_pipeline(const PipelineConfig& config, Stage terminal = Stage::All);

/// Same computation without touching the filesystem beyond reading inputs.
PipelineResult analyze(const PipelineConfig& config, Stage terminal = Stage::All);

/// Registers every pipeline option on the app, bound to config.
void bind_options(CLI::App& app, PipelineConfig& config);

/// Reads a key = value config file whose keys are the long option names.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace moralaxis
