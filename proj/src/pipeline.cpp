#include "moralaxis/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "moralaxis/digest.hpp"
#include "moralaxis/exports.hpp"
#include "moralaxis/random.hpp"
#include "moralaxis/text.hpp"

namespace moralaxis {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool reaches(Stage terminal, Stage s) {
  switch (s) {
    case Stage::Ingest: return true;
    case Stage::Score: return terminal != Stage::Ingest;
    case Stage::Cluster: return terminal != Stage::Ingest && terminal != Stage::Score;
    case Stage::Report: return terminal == Stage::Report || terminal == Stage::All;
    case Stage::Project: return terminal == Stage::Project || terminal == Stage::All;
    case Stage::All: return terminal == Stage::All;
  }
  return false;
}

// Tracks the stage currently running so failures can name it.
struct StageTracker {
  std::string current = "ingest";
};

template <class Fn>
auto in_stage(StageTracker& tracker, std::string name, Fn&& fn) {
  tracker.current = std::move(name);
  return fn();
}

json groups_json(const GroupCounts& c) {
  json out = json::object();
  for (auto g : kKeywordGroups) out[std::string(keyword_group_name(g))] = c[static_cast<std::size_t>(g)];
  return out;
}

json counts_json(const StageCounts& c) {
  return json{{"lines", c.lines},
              {"malformed", c.malformed},
              {"ingested", c.ingested},
              {"geo_kept", c.geo_kept},
              {"date_kept", c.date_kept},
              {"keyword_matched", c.keyword_matched},
              {"keyword_matched_per_group", groups_json(c.keyword_per_group)},
              {"deduplicated", c.deduplicated},
              {"deduplicated_per_group", groups_json(c.dedup_per_group)},
              {"moral", c.moral},
              {"moral_per_group", groups_json(c.moral_per_group)},
              {"non_moral_dropped", c.non_moral_dropped},
              {"projected", c.projected}};
}

json config_json(const PipelineConfig& c) {
  return json{{"bbox", {c.bbox.lat_min, c.bbox.lon_min, c.bbox.lat_max, c.bbox.lon_max}},
              {"from", format_day(c.dates.first)},
              {"to", format_day(c.dates.last)},
              {"allow_place", c.allow_place},
              {"lexicon_min_probability", c.lexicon_min_probability},
              {"baseline", baseline_mode_name(c.baseline)},
              {"embedding_mode", embedding_mode_name(c.embedding_mode)},
              {"standardize", c.standardize},
              {"k", c.k ? json(*c.k) : json(nullptr)},
              {"k_range", {c.k_min, c.k_max}},
              {"restarts", c.restarts},
              {"max_iter", c.max_iter},
              {"tol", c.tol},
              {"min_cluster_fraction", c.min_cluster_fraction},
              {"silhouette_cap", c.silhouette_cap ? json(*c.silhouette_cap) : json(nullptr)},
              {"vocab_min_count", c.vocab_min_count},
              {"vocab_top_n", c.vocab_top_n},
              {"foundation_top_n", c.foundation_top_n},
              {"tsne",
               {{"perplexity", c.tsne_perplexity},
                {"iterations", c.tsne_iterations},
                {"learning_rate", c.tsne_learning_rate},
                {"max_points", c.tsne_max_points}}},
              {"seed", c.seed}};
}

json input_json(const fs::path& p) { return json{{"path", p.generic_string()}, {"sha256", sha256_file(p)}}; }

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<Keyword> keywords_for(const PipelineConfig& config) {
  return config.keywords_file ? load_keywords(*config.keywords_file) : default_keywords();
}

Matrix embedding_matrix(std::span<const MoralEmbedding> embeddings, bool standardize) {
  Matrix m(embeddings.size(), kEmbeddingWidth);
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    std::copy(embeddings[i].values.begin(), embeddings[i].values.end(), m.row(i).begin());
  return standardize ? standardize_columns(m) : m;
}

struct Analysis {
  PipelineResult result;
  json manifest;
};

Analysis analyze_impl(const PipelineConfig& config, Stage terminal, StageTracker& tracker) {
  Analysis a;
  PipelineResult& r = a.result;
  r.stage = terminal;
  StageCounts& counts = r.counts;
  const StageSeeds seeds = derive_stage_seeds(config.seed);

  json inputs = json::object();

  // ---- ingest, filter, keyword match, dedup
  std::vector<Document> matched = in_stage(tracker, "ingest", [&] {
    if (!(config.dates.first <= config.dates.last)) throw std::invalid_argument("date range start is after its end");
    inputs["corpus"] = input_json(config.corpus);
    if (config.keywords_file) inputs["keywords"] = input_json(*config.keywords_file);
    const auto keywords = keywords_for(config);

    std::ifstream in(config.corpus);
    if (!in) throw std::runtime_error("cannot read corpus " + config.corpus.string());
    std::vector<Document> docs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      ++counts.lines;
      RawPost post;
      try {
        post = parse_post(line);
      } catch (const std::exception&) {
        ++counts.malformed;
        continue;
      }
      ++counts.ingested;
      if (!geo_filter(post, config.bbox, config.allow_place)) continue;
      ++counts.geo_kept;
      if (!date_filter(post, config.dates)) continue;
      ++counts.date_kept;

      Document d;
      d.doc_id = post.id;
      d.normalized_text = text::normalize_text(post.text);
      d.tokens = text::tokenize(d.normalized_text);
      d.day = std::chrono::floor<std::chrono::days>(post.created_at);
      const KeywordMatch m = match_keywords(d.tokens, keywords);
      if (!m.group) continue;
      d.matched_keywords = m.matched;
      d.keyword_group = *m.group;
      ++counts.keyword_matched;
      ++counts.keyword_per_group[static_cast<std::size_t>(d.keyword_group)];
      docs.push_back(std::move(d));
    }
    return docs;
  });

  DedupResult deduped = in_stage(tracker, "dedup", [&] { return dedup(std::move(matched)); });
  counts.deduplicated = deduped.unique.size();
  counts.dedup_per_group = deduped.unique_per_group;

  std::vector<Document> documents = std::move(deduped.unique);
  std::stable_sort(documents.begin(), documents.end(),
                   [](const Document& x, const Document& y) { return x.doc_id < y.doc_id; });
  {
    const auto dup = std::adjacent_find(documents.begin(), documents.end(),
                                        [](const Document& x, const Document& y) { return x.doc_id == y.doc_id; });
    if (dup != documents.end()) throw std::runtime_error("duplicate post id '" + dup->doc_id + "' in corpus");
  }

  std::string daily_basis = "deduplicated";
  if (reaches(terminal, Stage::Score)) {
    // ---- lexicon, embeddings, axes, scoring
    in_stage(tracker, "score", [&] {
      inputs["lexicon"] = input_json(config.lexicon);
      if (config.sentiment) inputs["sentiment"] = input_json(*config.sentiment);
      inputs["embeddings"] = input_json(config.embeddings);
      const MoralLexicon lexicon =
          load_lexicon(config.lexicon, config.sentiment, LexiconOptions{config.lexicon_min_probability});
      std::unordered_set<std::string> vocab;
      for (const auto& [term, e] : lexicon.entries()) vocab.insert(term);
      const EmbeddingTable table = load_embeddings(config.embeddings, &vocab);
      AxisSet axes = build_axes(lexicon, table);

      std::vector<Document> moral_docs;
      std::vector<MoralScore> scores;
      for (auto& d : documents) {
        auto s = score_document(d.tokens, lexicon, axes, table, d.doc_id);
        if (!s) continue;
        scores.push_back(std::move(*s));
        moral_docs.push_back(std::move(d));
      }
      counts.moral = moral_docs.size();
      counts.non_moral_dropped = documents.size() - moral_docs.size();
      for (const auto& d : moral_docs) ++counts.moral_per_group[static_cast<std::size_t>(d.keyword_group)];
      documents = std::move(moral_docs);
      if (documents.empty()) throw std::runtime_error("0 moral documents after the moral filter");

      axes = compute_baseline(scores, std::move(axes), config.baseline);
      for (std::size_t i = 0; i < documents.size(); ++i)
        scores[i] = *score_document(documents[i].tokens, lexicon, axes, table, documents[i].doc_id);

      std::map<std::string, std::size_t> term_counts;
      for (const auto& d : documents)
        for (const auto& t : d.tokens) ++term_counts[t];
      r.foundation_vocab = foundation_vocabulary(term_counts, lexicon, axes, table, config.foundation_top_n);

      for (const auto& s : scores) {
        r.embeddings.push_back(embed(s, config.embedding_mode));
        r.pole_embeddings.push_back(embed(s, EmbeddingMode::Poles));
      }
      std::vector<std::size_t> zeros(documents.size(), 0);
      r.corpus_activation = cluster_activations(r.pole_embeddings, zeros, 1).back();
      r.scores = std::move(scores);
      r.axes = std::move(axes);

      a.manifest["embeddings"] = {{"dimension", table.dimension()},
                                  {"retained", table.size()},
                                  {"malformed_lines", table.load_report().malformed},
                                  {"duplicates", table.load_report().duplicates}};
      json poles = json::object();
      for (Foundation f : kFoundations)
        poles[std::string(foundation_name(f))] = {
            {"virtue", lexicon.pole(f, Polarity::Virtue).size()},
            {"vice", lexicon.pole(f, Polarity::Vice).size()},
            {"virtue_resolved", r.axes->axis(f).virtue_terms_resolved},
            {"vice_resolved", r.axes->axis(f).vice_terms_resolved},
            {"baseline_bias", r.axes->baseline_bias[index_of(f)]}};
      a.manifest["lexicon"] = {{"entries", lexicon.size()},
                               {"neutral", lexicon.neutral_count()},
                               {"duplicates", lexicon.load_report().duplicates},
                               {"below_threshold", lexicon.load_report().below_threshold},
                               {"poles", poles}};
    });
    daily_basis = "moral";
  }
  r.daily = daily_counts(documents, config.dates);

  Matrix points;
  if (reaches(terminal, Stage::Cluster)) {
    in_stage(tracker, "cluster", [&] {
      points = embedding_matrix(r.embeddings, config.standardize);
      const std::size_t n = points.rows();
      if (n < 2) throw std::runtime_error(std::to_string(n) + " moral document(s); clustering needs at least 2");
      SelectionOptions so;
      so.k_min = config.k_min;
      so.k_max = std::min(config.k_max, n);
      so.seed = seeds.selection;
      so.min_cluster_fraction = config.min_cluster_fraction;
      so.restarts = config.restarts;
      so.max_iter = config.max_iter;
      so.tol = config.tol;
      so.silhouette = SilhouetteOptions{config.silhouette_cap, seeds.silhouette};
      r.selection = select_k(points, so);

      const std::size_t k = config.k.value_or(r.selection->chosen_k);
      KMeansOptions ko;
      ko.k = k;
      ko.seed = kmeans_seed_for(seeds.selection, k);
      ko.restarts = config.restarts;
      ko.max_iter = config.max_iter;
      ko.tol = config.tol;
      r.model = kmeans(points, ko);
      r.model_silhouette = silhouette(points, r.model->labels, so.silhouette);
      r.activations = cluster_activations(r.pole_embeddings, r.model->labels, k);
    });
  }

  if (reaches(terminal, Stage::Report)) {
    in_stage(tracker, "report", [&] {
      std::vector<std::vector<std::string>> tokens;
      tokens.reserve(documents.size());
      for (const auto& d : documents) tokens.push_back(d.tokens);
      r.vocabulary =
          distinctive_vocabulary(tokens, r.model->labels, r.model->k, config.vocab_min_count, config.vocab_top_n);
    });
  }

  if (reaches(terminal, Stage::Project)) {
    in_stage(tracker, "project", [&] {
      std::vector<std::size_t> rows(points.rows());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      if (rows.size() > config.tsne_max_points) {
        Rng rng(seeds.tsne_sample);
        for (std::size_t i = 0; i < config.tsne_max_points; ++i)
          std::swap(rows[i], rows[i + rng.below(rows.size() - i)]);
        rows.resize(config.tsne_max_points);
        std::sort(rows.begin(), rows.end());
      }
      Matrix sub(rows.size(), points.cols());
      for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(points.row(rows[i]).begin(), points.row(rows[i]).end(), sub.row(i).begin());
      TsneConfig tc;
      tc.perplexity = config.tsne_perplexity;
      tc.iterations = config.tsne_iterations;
      tc.learning_rate = config.tsne_learning_rate;
      tc.seed = seeds.tsne;
      r.projection = tsne(sub, tc);
      r.projected_rows = std::move(rows);
      counts.projected = r.projected_rows.size();
    });
  }

  r.documents = std::move(documents);

  // ---- manifest identity: tool version, inputs and configuration
  json identity = {{"tool", "moralaxis"},
                   {"version", kToolVersion},
                   {"stage", stage_name(terminal)},
                   {"inputs", inputs},
                   {"config", config_json(config)}};
  r.manifest_digest = sha256_hex(identity.dump());
  a.manifest["manifest_digest"] = r.manifest_digest;
  for (auto& [key, value] : identity.items()) a.manifest[key] = value;
  a.manifest["seeds"] = {{"root", config.seed},
                         {"selection", seeds.selection},
                         {"silhouette", seeds.silhouette},
                         {"tsne", seeds.tsne},
                         {"tsne_sample", seeds.tsne_sample}};
  a.manifest["counts"] = counts_json(counts);
  a.manifest["daily_counts_basis"] = daily_basis;
  if (r.selection) {
    a.manifest["selection"] = {{"chosen_k", r.selection->chosen_k},
                               {"used_k", r.model->k},
                               {"k_overridden", config.k.has_value()},
                               {"fallback", r.selection->fallback}};
  }
  if (r.projection) {
    json trace = json::array();
    for (const auto& s : r.projection->kl_trace) trace.push_back({{"iteration", s.iteration}, {"kl", s.kl}});
    a.manifest["tsne"] = {{"initial_kl", r.projection->initial_kl}, {"kl_trace", trace}};
  }
  return a;
}

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Score: return "score";
    case Stage::Cluster: return "cluster";
    case Stage::Report: return "report";
    case Stage::Project: return "project";
    case Stage::All: return "pipeline";
  }
  return "pipeline";
}

StageSeeds derive_stage_seeds(std::uint64_t root) {
  return StageSeeds{derive_seed(root, "select_k"), derive_seed(root, "silhouette"), derive_seed(root, "tsne"),
                    derive_seed(root, "tsne_sample")};
}

PipelineResult analyze(const PipelineConfig& config, Stage terminal) {
  StageTracker tracker;
  try {
    return analyze_impl(config, terminal, tracker).result;
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(tracker.current, e.what());
  }
}

PipelineResult run_pipeline(const PipelineConfig& config, Stage terminal) {
  StageTracker tracker;
  const fs::path marker = config.out_dir / "_FAILED";
  try {
    fs::create_directories(config.out_dir);
    fs::remove(marker);
    Analysis a = analyze_impl(config, terminal, tracker);
    PipelineResult& r = a.result;

    tracker.current = "export";
    const std::string& digest = r.manifest_digest;
    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("daily_counts.csv", exports::daily_counts_csv(r.daily, digest));
    if (r.axes) {
      files.emplace_back("scores.csv", exports::scores_csv(r.scores, digest));
      files.emplace_back("foundation_vocab.json",
                         exports::foundation_vocab_json(*r.foundation_vocab, config.foundation_top_n, digest).dump(2) +
                             "\n");
    }
    if (r.model) {
      files.emplace_back("labels.csv", exports::labels_csv(r.documents, r.model->labels, digest));
      files.emplace_back("selection.csv", exports::selection_csv(*r.selection, r.model->k, digest));
      files.emplace_back("clusters.json", exports::clusters_json(*r.model, *r.model_silhouette, r.activations,
                                                                 config.embedding_mode, config.standardize, digest)
                                                  .dump(2) +
                                              "\n");
    }
    if (r.vocabulary)
      files.emplace_back("vocabulary.json", exports::vocabulary_json(*r.vocabulary, config.vocab_top_n, digest).dump(2) + "\n");
    if (r.projection)
      files.emplace_back("tsne.csv",
                         exports::tsne_csv(r.documents, r.projected_rows, *r.projection, r.model->labels, digest));

    json artifacts = json::object();
    for (const auto& [name, bytes] : files) {
      write_file(config.out_dir / name, bytes);
      artifacts[name] = sha256_hex(bytes);
      r.artifacts.push_back(name);
    }
    a.manifest["artifacts"] = artifacts;
    write_file(config.out_dir / "manifest.json", a.manifest.dump(2) + "\n");
    r.artifacts.push_back("manifest.json");
    return std::move(r);
  } catch (const std::exception& e) {
    const std::string stage = [&] {
      if (const auto* pe = dynamic_cast<const PipelineError*>(&e)) return pe->stage();
      return tracker.current;
    }();
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    std::ofstream(marker) << "stage: " << stage << "\nerror: " << e.what() << "\n";
    if (dynamic_cast<const PipelineError*>(&e)) throw;
    throw PipelineError(stage, e.what());
  }
}

}  // namespace moralaxis
