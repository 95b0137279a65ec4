#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moralaxis/embedding_store.hpp"
#include "moralaxis/moral_lexicon.hpp"

namespace moralaxis {

/// Semantic axis of one foundation: the normalized difference between the
/// virtue-pole and vice-pole centroids.
struct FoundationAxis {
  Foundation foundation = Foundation::Care;
  std::vector<double> direction;  // unit norm
  std::vector<double> virtue_centroid;
  std::vector<double> vice_centroid;
  std::size_t virtue_terms_resolved = 0;
  std::size_t vice_terms_resolved = 0;
};

enum class BaselineMode { Corpus, Zero };

std::string_view baseline_mode_name(BaselineMode m);
BaselineMode parse_baseline_mode(std::string_view s);

struct AxisSet {
  std::array<FoundationAxis, kFoundationCount> axes;
  std::array<double, kFoundationCount> baseline_bias{};

  const FoundationAxis& axis(Foundation f) const { return axes[index_of(f)]; }
};

using PerFoundation = std::array<double, kFoundationCount>;

struct MoralScore {
  std::string doc_id;
  PerFoundation bias{};
  PerFoundation intensity{};
  PerFoundation virtue{};
  PerFoundation vice{};
  std::size_t contributing_tokens = 0;
};

enum class EmbeddingMode { Poles, FrameAxis };

std::string_view embedding_mode_name(EmbeddingMode m);
EmbeddingMode parse_embedding_mode(std::string_view s);

inline constexpr std::size_t kEmbeddingWidth = 2 * kFoundationCount;

/// Ten-dimensional document vector. Poles layout is [virtue, vice] per
/// foundation; FrameAxis layout is [bias, intensity] per foundation.
struct MoralEmbedding {
  std::string doc_id;
  std::array<double, kEmbeddingWidth> values{};
  EmbeddingMode mode = EmbeddingMode::Poles;
};

/// Column names of a 10-vector in the given layout ("care_virtue", ...).
std::array<std::string, kEmbeddingWidth> embedding_columns(EmbeddingMode mode);

/// Throws std::runtime_error naming the foundation and pole when a pole has
/// no term in the table, or when the two centroids coincide.
AxisSet build_axes(const MoralLexicon& lexicon, const EmbeddingTable& table);

/// Cosine of the term's vector with the axis; nullopt when out of vocabulary.
std::optional<double> project_word(std::string_view term, const FoundationAxis& axis, const EmbeddingTable& table);

/// Bag-of-words bias/intensity/pole activations over the tokens that are both
/// lexicon members and in the table, weighted by count. Returns nullopt when
/// no token contributes.
std::optional<MoralScore> score_document(std::span<const std::string> tokens, const MoralLexicon& lexicon,
                                         const AxisSet& axes, const EmbeddingTable& table,
                                         std::string doc_id = {});

/// Sets baseline_bias to the token-weighted mean projection over all scored
/// documents (Corpus) or to zero (Zero). Scores must have been computed
/// against the same axes. Throws std::invalid_argument for an empty corpus.
AxisSet compute_baseline(std::span<const MoralScore> scores, AxisSet axes, BaselineMode mode);

MoralEmbedding embed(const MoralScore& score, EmbeddingMode mode = EmbeddingMode::Poles);

struct VocabularyTerm {
  std::string term;
  double projection = 0.0;
  std::size_t frequency = 0;
};

struct FoundationVocabulary {
  // [foundation][0 = virtue, 1 = vice]
  std::array<std::array<std::vector<VocabularyTerm>, 2>, kFoundationCount> lists;

  const std::vector<VocabularyTerm>& list(Foundation f, Polarity p) const {
    return lists[index_of(f)][p == Polarity::Virtue ? 0 : 1];
  }
};

/// Top lexicon-member corpus terms per foundation pole: most positive
/// projection for virtue, most negative for vice. Ties break by frequency,
/// then term.
FoundationVocabulary foundation_vocabulary(const std::map<std::string, std::size_t>& corpus_terms,
                                           const MoralLexicon& lexicon, const AxisSet& axes,
                                           const EmbeddingTable& table, std::size_t top_n);

}  // namespace moralaxis
