// Command-line front end: ingest, score, cluster, report, project, pipeline.

#include <fmt/format.h>

#include <iostream>

#include "CLI11.hpp"
#include "moralaxis/pipeline.hpp"

namespace {

void print_counts(const moralaxis::PipelineResult& r) {
  using moralaxis::keyword_group_name;
  using moralaxis::kKeywordGroups;
  const auto& c = r.counts;
  fmt::print("lines            {}\n", c.lines);
  fmt::print("malformed        {}\n", c.malformed);
  fmt::print("ingested         {}\n", c.ingested);
  fmt::print("geo kept         {}\n", c.geo_kept);
  fmt::print("date kept        {}\n", c.date_kept);
  fmt::print("keyword matched  {}\n", c.keyword_matched);
  fmt::print("deduplicated     {}\n", c.deduplicated);
  if (r.axes) fmt::print("moral            {} ({} dropped)\n", c.moral, c.non_moral_dropped);
  for (auto g : kKeywordGroups) {
    const auto i = static_cast<std::size_t>(g);
    fmt::print("  {:<20} matched {:>6}  unique {:>6}  moral {:>6}\n", keyword_group_name(g), c.keyword_per_group[i],
               c.dedup_per_group[i], c.moral_per_group[i]);
  }
  if (r.selection) {
    fmt::print("k sweep:\n");
    for (const auto& row : r.selection->rows)
      fmt::print("  k={:<3} silhouette {:.4f}  inertia {:.4f}  min size {:.3f}{}\n", row.k, row.mean_silhouette,
                 row.inertia, row.min_cluster_fraction, row.k == r.model->k ? "  <- used" : "");
  }
  if (r.projection) fmt::print("t-SNE points     {}\n", c.projected);
  fmt::print("manifest digest  {}\n", r.manifest_digest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Moral-foundation framing analysis of short-text corpora");
  app.set_config("--config", "", "key = value file mirroring the long options; flags override it");
  app.require_subcommand(1);

  moralaxis::PipelineConfig config;
  moralaxis::bind_options(app, config);

  const std::pair<const char*, moralaxis::Stage> commands[] = {
      {"ingest", moralaxis::Stage::Ingest},   {"score", moralaxis::Stage::Score},
      {"cluster", moralaxis::Stage::Cluster}, {"report", moralaxis::Stage::Report},
      {"project", moralaxis::Stage::Project}, {"pipeline", moralaxis::Stage::All}};
  const char* help[] = {"Filter, keyword-match and deduplicate the corpus; write daily counts",
                        "Score documents on the foundation axes; write scores and foundation vocabulary",
                        "Select k and cluster the moral embeddings",
                        "Cluster, then extract cluster-distinctive vocabulary",
                        "Cluster, then compute t-SNE plot coordinates",
                        "Run every stage and write all artifacts"};
  moralaxis::Stage stage = moralaxis::Stage::All;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->fallthrough();
    sub->callback([&stage, s = commands[i].second] { stage = s; });
  }

  CLI11_PARSE(app, argc, argv);

  if (config.corpus.empty()) {
    std::cerr << "error: --corpus is required\n";
    return 2;
  }
  if (stage != moralaxis::Stage::Ingest && (config.embeddings.empty() || config.lexicon.empty())) {
    std::cerr << "error: --embeddings and --lexicon are required for this command\n";
    return 2;
  }

  try {
    const auto result = moralaxis::run_pipeline(config, stage);
    print_counts(result);
    fmt::print("wrote {} file(s) to {}\n", result.artifacts.size(), config.out_dir.string());
  } catch (const moralaxis::PipelineError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
