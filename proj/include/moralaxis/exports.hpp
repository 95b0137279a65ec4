#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moralaxis/analytics.hpp"
#include "moralaxis/corpus.hpp"
#include "moralaxis/framing.hpp"
#include "moralaxis/projection.hpp"

namespace moralaxis::exports {

// CSV artifacts start with a "# manifest_digest=<hex>" comment line.

/// doc_id, ten pole columns, then ten bias/intensity columns.
std::string scores_csv(std::span<const MoralScore> scores, std::string_view digest);

std::string labels_csv(std::span<const Document> documents, std::span<const std::size_t> labels,
                       std::string_view digest);

std::string selection_csv(const SelectionTable& table, std::size_t chosen_k, std::string_view digest);

std::string daily_counts_csv(const DailySeries& series, std::string_view digest);

/// rows[i] is the document index behind projection row i.
std::string tsne_csv(std::span<const Document> documents, std::span<const std::size_t> rows,
                     const Projection& projection, std::span<const std::size_t> labels, std::string_view digest);

nlohmann::json activation_json(const ActivationSummary& summary);

nlohmann::json clusters_json(const ClusterModel& model, const SilhouetteReport& silhouette,
                             std::span<const ActivationSummary> activations, EmbeddingMode mode, bool standardized,
                             std::string_view digest);

nlohmann::json vocabulary_json(const VocabularyReport& report, std::size_t top_n, std::string_view digest);

nlohmann::json foundation_vocab_json(const FoundationVocabulary& vocab, std::size_t top_n, std::string_view digest);

/// Shortest round-trip decimal form of a double.
std::string number(double v);

}  // namespace moralaxis::exports
