#include <charconv>
#include <limits>

#include "CLI11.hpp"
#include "moralaxis/pipeline.hpp"

namespace moralaxis {

namespace {

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  const auto dash = s.find('-');
  const auto sep = dots != std::string::npos ? dots : dash;
  const std::size_t sep_len = dots != std::string::npos ? 2 : 1;
  if (sep == std::string::npos) throw CLI::ValidationError("--k-range", "expected LO..HI, got '" + s + "'");
  std::size_t lo = 0, hi = 0;
  const auto r1 = std::from_chars(s.data(), s.data() + sep, lo);
  const auto r2 = std::from_chars(s.data() + sep + sep_len, s.data() + s.size(), hi);
  if (r1.ec != std::errc() || r1.ptr != s.data() + sep || r2.ec != std::errc() || r2.ptr != s.data() + s.size())
    throw CLI::ValidationError("--k-range", "expected LO..HI, got '" + s + "'");
  return {lo, hi};
}

template <class Fn>
auto rethrow_as_validation(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError(name, e.what());
  }
}

}  // namespace

void bind_options(CLI::App& app, PipelineConfig& c) {
  app.add_option_function<std::string>("--corpus", [&c](const std::string& v) { c.corpus = v; },
                                       "JSONL corpus, one post per line");
  app.add_option_function<std::string>("--embeddings", [&c](const std::string& v) { c.embeddings = v; },
                                       "Plain-text word vectors");
  app.add_option_function<std::string>("--lexicon", [&c](const std::string& v) { c.lexicon = v; },
                                       "Moral lexicon CSV");
  app.add_option_function<std::string>("--sentiment", [&c](const std::string& v) { c.sentiment = v; },
                                       "Sentiment CSV (word,score)");
  app.add_option_function<std::string>("--keywords-file", [&c](const std::string& v) { c.keywords_file = v; },
                                       "Search terms, one per line");
  app.add_option_function<std::string>("--out-dir", [&c](const std::string& v) { c.out_dir = v; },
                                       "Output directory")
      ->default_str("out");

  app.add_option_function<std::string>(
         "--bbox", [&c](const std::string& v) { c.bbox = rethrow_as_validation("--bbox", [&] { return parse_bbox(v); }); },
         "lat_min,lon_min,lat_max,lon_max")
      ->default_str("32.75,-118.95,34.82,-117.646374");
  app.add_option_function<std::string>(
         "--from", [&c](const std::string& v) { c.dates.first = rethrow_as_validation("--from", [&] { return parse_day(v); }); },
         "First day (YYYY-MM-DD, inclusive)")
      ->default_str("2020-02-24");
  app.add_option_function<std::string>(
         "--to", [&c](const std::string& v) { c.dates.last = rethrow_as_validation("--to", [&] { return parse_day(v); }); },
         "Last day (YYYY-MM-DD, inclusive)")
      ->default_str("2020-08-24");
  app.add_flag("--allow-place", c.allow_place, "Admit posts without coordinates that carry a place");

  app.add_option("--lexicon-min-prob", c.lexicon_min_probability,
                 "Drop lexicon entries whose largest probability is below this")
      ->capture_default_str();
  app.add_option_function<std::string>(
         "--baseline",
         [&c](const std::string& v) { c.baseline = rethrow_as_validation("--baseline", [&] { return parse_baseline_mode(v); }); },
         "Intensity reference point")
      ->check(CLI::IsMember({"corpus", "zero"}))
      ->default_str("corpus");
  app.add_option_function<std::string>(
         "--embedding-mode",
         [&c](const std::string& v) {
           c.embedding_mode = rethrow_as_validation("--embedding-mode", [&] { return parse_embedding_mode(v); });
         },
         "10-vector layout")
      ->check(CLI::IsMember({"poles", "frameaxis"}))
      ->default_str("poles");
  app.add_flag("--standardize", c.standardize, "z-score embedding columns before clustering");

  app.add_option_function<std::size_t>("--k", [&c](std::size_t v) { c.k = v; }, "Use this k instead of the silhouette choice")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  app.add_option_function<std::string>(
         "--k-range",
         [&c](const std::string& v) {
           const auto [lo, hi] = parse_range(v);
           if (lo < 2 || lo > hi) throw CLI::ValidationError("--k-range", "need 2 <= LO <= HI");
           c.k_min = lo;
           c.k_max = hi;
         },
         "k sweep for model selection, LO..HI")
      ->default_str("2..10");
  app.add_option("--restarts", c.restarts, "k-means restarts per k")->capture_default_str();
  app.add_option("--max-iter", c.max_iter, "Lloyd iteration cap")->capture_default_str();
  app.add_option("--tol", c.tol, "Relative inertia improvement threshold")->capture_default_str();
  app.add_option("--min-cluster-fraction", c.min_cluster_fraction, "Smallest cluster share for an eligible k")
      ->capture_default_str();
  app.add_option_function<std::size_t>(
         "--silhouette-cap", [&c](std::size_t v) { c.silhouette_cap = v == 0 ? std::nullopt : std::optional(v); },
         "Silhouette sample size (0 = all points)")
      ->default_str("10000");

  app.add_option("--vocab-min-count", c.vocab_min_count, "Minimum in-cluster count for distinctive terms")
      ->capture_default_str();
  app.add_option("--vocab-top-n", c.vocab_top_n, "Distinctive terms per cluster")->capture_default_str();
  app.add_option("--foundation-top-n", c.foundation_top_n, "Terms per foundation pole")->capture_default_str();

  app.add_option("--tsne-perplexity", c.tsne_perplexity, "t-SNE perplexity")->capture_default_str();
  app.add_option("--tsne-iterations", c.tsne_iterations, "t-SNE iterations")->capture_default_str();
  app.add_option("--tsne-learning-rate", c.tsne_learning_rate, "t-SNE learning rate")->capture_default_str();
  app.add_option("--tsne-max-points", c.tsne_max_points, "Subsample above this many documents")
      ->capture_default_str();

  app.add_option("--seed", c.seed, "Root seed")->capture_default_str();
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  PipelineConfig config;
  CLI::App app("moralaxis config");
  bind_options(app, config);
  app.set_config("--config", path.string(), "", true);
  try {
    app.parse(std::vector<std::string>{});
  } catch (const CLI::ParseError& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  return config;
}

}  // namespace moralaxis
