#include "moralaxis/exports.hpp"

#include <fmt/format.h>

#include "moralaxis/csv.hpp"

namespace moralaxis::exports {

using nlohmann::json;

namespace {

std::string header_comment(std::string_view digest) { return fmt::format("# manifest_digest={}\n", digest); }

json summary_json(const Summary& s) {
  return json{{"mean", s.mean}, {"sd", s.sd}, {"n", s.n}, {"ci95_half_width", s.ci95_half_width}};
}

}  // namespace

std::string number(double v) { return fmt::format("{}", v); }

std::string scores_csv(std::span<const MoralScore> scores, std::string_view digest) {
  std::string out = header_comment(digest);
  out += "doc_id";
  for (const auto& c : embedding_columns(EmbeddingMode::Poles)) out += "," + c;
  for (const auto& c : embedding_columns(EmbeddingMode::FrameAxis)) out += "," + c;
  out += '\n';
  for (const auto& s : scores) {
    out += csv::escape(s.doc_id);
    for (std::size_t f = 0; f < kFoundationCount; ++f) out += "," + number(s.virtue[f]) + "," + number(s.vice[f]);
    for (std::size_t f = 0; f < kFoundationCount; ++f) out += "," + number(s.bias[f]) + "," + number(s.intensity[f]);
    out += '\n';
  }
  return out;
}

std::string labels_csv(std::span<const Document> documents, std::span<const std::size_t> labels,
                       std::string_view digest) {
  std::string out = header_comment(digest);
  out += "doc_id,cluster\n";
  for (std::size_t i = 0; i < documents.size(); ++i) out += fmt::format("{},{}\n", csv::escape(documents[i].doc_id), labels[i]);
  return out;
}

std::string selection_csv(const SelectionTable& table, std::size_t chosen_k, std::string_view digest) {
  std::string out = header_comment(digest);
  out += "k,mean_silhouette,inertia,min_cluster_fraction,max_cluster_fraction,eligible,chosen\n";
  for (const auto& r : table.rows)
    out += fmt::format("{},{},{},{},{},{},{}\n", r.k, number(r.mean_silhouette), number(r.inertia),
                       number(r.min_cluster_fraction), number(r.max_cluster_fraction), r.eligible ? 1 : 0,
                       r.k == chosen_k ? 1 : 0);
  return out;
}

std::string daily_counts_csv(const DailySeries& series, std::string_view digest) {
  std::string out = header_comment(digest);
  out += "date";
  for (auto g : kKeywordGroups) out += fmt::format(",{}", keyword_group_name(g));
  out += ",total\n";
  for (std::size_t i = 0; i < series.days.size(); ++i) {
    out += format_day(series.days[i]);
    for (auto c : series.per_group[i]) out += fmt::format(",{}", c);
    out += fmt::format(",{}\n", series.total[i]);
  }
  return out;
}

std::string tsne_csv(std::span<const Document> documents, std::span<const std::size_t> rows,
                     const Projection& projection, std::span<const std::size_t> labels, std::string_view digest) {
  std::string out = header_comment(digest);
  out += "doc_id,x,y,cluster\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t d = rows[r];
    out += fmt::format("{},{},{},{}\n", csv::escape(documents[d].doc_id), number(projection.coordinates(r, 0)),
                       number(projection.coordinates(r, 1)), labels[d]);
  }
  return out;
}

json activation_json(const ActivationSummary& summary) {
  json dims = json::object();
  const auto cols = embedding_columns(EmbeddingMode::Poles);
  for (std::size_t d = 0; d < kEmbeddingWidth; ++d) dims[cols[d]] = summary_json(summary.dims[d]);
  return json{{"group", summary.group}, {"n", summary.dims[0].n}, {"dims", dims}};
}

json clusters_json(const ClusterModel& model, const SilhouetteReport& silhouette,
                   std::span<const ActivationSummary> activations, EmbeddingMode mode, bool standardized,
                   std::string_view digest) {
  json centroids = json::array();
  for (std::size_t c = 0; c < model.k; ++c) {
    const auto row = model.centroids.row(c);
    centroids.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json acts = json::array();
  json overall;
  for (const auto& a : activations) {
    if (a.group == "all") {
      overall = activation_json(a);
    } else {
      acts.push_back(activation_json(a));
    }
  }
  const auto cols = embedding_columns(mode);
  return json{{"manifest_digest", digest},
              {"k", model.k},
              {"embedding_mode", embedding_mode_name(mode)},
              {"standardized", standardized},
              {"centroid_columns", std::vector<std::string>(cols.begin(), cols.end())},
              {"sizes", model.sizes()},
              {"centroids", centroids},
              {"inertia", model.inertia},
              {"seed", model.seed},
              {"restarts", model.restarts},
              {"silhouette",
               {{"mean", silhouette.mean},
                {"evaluated_points", silhouette.per_sample.size()},
                {"sampled", silhouette.sampled},
                {"sample_cap", silhouette.sample_cap ? json(*silhouette.sample_cap) : json(nullptr)}}},
              {"activations", acts},
              {"overall", overall}};
}

json vocabulary_json(const VocabularyReport& report, std::size_t top_n, std::string_view digest) {
  json clusters = json::array();
  for (std::size_t c = 0; c < report.clusters.size(); ++c) {
    json terms = json::array();
    for (const auto& t : report.clusters[c])
      terms.push_back({{"term", t.term}, {"count", t.in_cluster_count}, {"distinctiveness", t.distinctiveness}});
    clusters.push_back({{"cluster", c}, {"terms", terms}});
  }
  return json{{"manifest_digest", digest}, {"min_count", report.min_count}, {"top_n", top_n}, {"clusters", clusters}};
}

json foundation_vocab_json(const FoundationVocabulary& vocab, std::size_t top_n, std::string_view digest) {
  json foundations = json::object();
  for (Foundation f : kFoundations) {
    json poles = json::object();
    for (Polarity p : {Polarity::Virtue, Polarity::Vice}) {
      json terms = json::array();
      for (const auto& t : vocab.list(f, p))
        terms.push_back({{"term", t.term}, {"projection", t.projection}, {"frequency", t.frequency}});
      poles[std::string(polarity_name(p))] = terms;
    }
    foundations[std::string(foundation_name(f))] = poles;
  }
  return json{{"manifest_digest", digest}, {"top_n", top_n}, {"foundations", foundations}};
}

}  // namespace moralaxis::exports
